#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photocov/vec2.hpp"

namespace photocov {

/// One isotropic Gaussian peak of a feature-density field.
struct GaussianComponent {
  double amplitude = 1.0;  // relative features per unit area, > 0
  Point2 center;
  double sigma = 0.1;  // meters, > 0
};

/// Feature density as a sum of isotropic Gaussian peaks plus an optional
/// uniform floor. The floor keeps centroids well-defined in cells far from
/// every peak; set it to 0 to evaluate the mixture alone.
struct GaussianMixtureDensity {
  std::vector<GaussianComponent> components;
  double floor = 0.0;

  double eval(Point2 q) const;
};

inline double eval(const GaussianMixtureDensity& density, Point2 q) { return density.eval(q); }

/// Extracted feature count observed at an image location.
struct FeatureMeasurement {
  Point2 location;
  double feature_count = 0.0;
};

struct FitResult {
  GaussianMixtureDensity density;
  double residual = 0.0;          // final sum of squared residuals
  double initial_residual = 0.0;  // residual of the best initial guess tried
  int iterations = 0;             // accepted Gauss-Newton steps, best start
  /// Residual after each accepted step of the winning start (non-increasing).
  std::vector<double> residual_history;
};

/// Least-squares fit of a k-component mixture to feature-count measurements
/// via damped Gauss-Newton with multi-start initialization (peaks seeded at
/// the k largest counts plus random restarts). Throws std::invalid_argument
/// "underdetermined fit" when measurements.size() < 4k and "degenerate
/// measurements" when all counts are equal.
FitResult fit_mixture_detailed(const std::vector<FeatureMeasurement>& measurements, int k,
                               std::uint64_t seed);

GaussianMixtureDensity fit_mixture(const std::vector<FeatureMeasurement>& measurements, int k,
                                   std::uint64_t seed);

/// Sum of squared residuals of a mixture against measurements.
double mixture_residual(const GaussianMixtureDensity& density,
                        const std::vector<FeatureMeasurement>& measurements);

/// CSV with header "x,y,count".
std::vector<FeatureMeasurement> read_measurements_csv(const std::string& path);
void write_measurements_csv(const std::string& path, const std::vector<FeatureMeasurement>& rows);

/// JSON document {"components":[{"amplitude":..,"center":[x,y],"sigma":..}],"floor":..}.
std::string density_to_json(const GaussianMixtureDensity& density);
GaussianMixtureDensity density_from_json(const std::string& text);
GaussianMixtureDensity read_density_json(const std::string& path);
void write_density_json(const std::string& path, const GaussianMixtureDensity& density);

}  // namespace photocov
