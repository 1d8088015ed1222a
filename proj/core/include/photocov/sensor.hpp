#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace photocov {

/// Quadratic degradation with distance from the two assigned agents.
double sensor_g(double x, double y);

/// Quadratic inside the joint field of view (max(x, y) <= r), constant
/// penalty 2*diam_q^2 outside; the penalty is the largest quadratic value
/// two in-region agents can produce.
double sensor_h(double x, double y, double fov_radius, double region_diameter);

/// Sensor model f(x, y) of the distances from a point to its two assigned
/// agents.
struct SensorModel {
  enum class Kind { Auxiliary, Photogrammetry };

  Kind kind = Kind::Auxiliary;
  double fov_radius = 0.0;       // meters; Photogrammetry only
  double region_diameter = 0.0;  // meters; Photogrammetry only

  static SensorModel auxiliary() { return {}; }
  static SensorModel photogrammetry(double fov_radius, double region_diameter);

  double operator()(double x, double y) const;

  /// Discontinuity classifier: branch id at distances (x, y), or
  /// std::nullopt for smooth sensors. Quadrature forces subdivision where
  /// the branch changes across a triangle.
  std::optional<int> branch(double x, double y) const;
  bool discontinuous() const { return kind == Kind::Photogrammetry; }
};

/// Lemma-style bound ratio beta = r / (sqrt(2) diam) and the factor 1/beta^2
/// by which the auxiliary cost bounds the photogrammetry cost from above.
struct BoundFactors {
  double beta = 0.0;
  double upper_factor = 0.0;
};

/// Throws std::invalid_argument("bound undefined") unless 0 < r < diam.
BoundFactors bound_factors(double fov_radius, double region_diameter);

struct SensorConditionReport {
  long samples = 0;
  long monotone_x_violations = 0;  // f(x+k, y) >= f(x, y) failed
  long monotone_y_violations = 0;  // f(x, y+k) >= f(x, y) failed
  long symmetry_violations = 0;    // f(x, y) == f(y, x) failed
  // First violating triple, for replay.
  bool has_example = false;
  double example_x = 0.0, example_y = 0.0, example_k = 0.0;

  long total_violations() const {
    return monotone_x_violations + monotone_y_violations + symmetry_violations;
  }
  bool passed() const { return total_violations() == 0; }
};

/// Randomized check of monotonicity in each argument and symmetry over
/// `samples` triples (x, y, k) in [0, diam]^2 x [0, diam].
SensorConditionReport check_sensor_conditions(const std::function<double(double, double)>& sensor,
                                              double domain_scale, long samples,
                                              std::uint64_t seed);
SensorConditionReport check_sensor_conditions(const SensorModel& sensor, long samples,
                                              std::uint64_t seed);

}  // namespace photocov
