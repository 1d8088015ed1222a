#pragma once

#include <functional>

#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/sensor.hpp"

namespace photocov {

/// Adaptive triangle quadrature over the fan triangulation of a convex
/// cell: a symmetric base rule per triangle, 4-way midpoint subdivision
/// until successive estimates agree to rel_tol or max_subdivisions is
/// reached. Triangles whose corners disagree on a sensor branch are forced
/// to full depth.
struct QuadratureSpec {
  int base_rule_degree = 7;  // polynomial exactness of the triangle rule, >= 2
  int max_subdivisions = 6;
  double rel_tol = 1e-6;
};

inline constexpr double kMassFloor = 1e-12;

/// Integral of f over the cell; 0 for an empty cell.
double integrate(const ConvexPolygon& cell, const std::function<double(Point2)>& f,
                 const QuadratureSpec& spec);

/// As integrate, forcing full subdivision where `branch` differs across a
/// triangle's corners.
double integrate(const ConvexPolygon& cell, const std::function<double(Point2)>& f,
                 const std::function<int(Point2)>& branch, const QuadratureSpec& spec);

/// Density mass and first moments of a cell, integrated in one pass.
struct CellMoments {
  double mass = 0.0;
  Vec2 first_moment;  // integral of q * density

  Point2 centroid() const { return first_moment / mass; }
};

CellMoments cell_moments(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                         const QuadratureSpec& spec);

/// Integral of the density over the cell.
double cell_mass(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                 const QuadratureSpec& spec);

/// Density-weighted centroid. Throws std::runtime_error("massless cell")
/// when the cell mass is at or below mass_floor.
Point2 cell_centroid(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                     const QuadratureSpec& spec, double mass_floor = kMassFloor);

/// Integral over the cell of sensor(|q-p_i|, |q-p_j|) * density(q).
double cell_cost_integral(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                          const SensorModel& sensor, Point2 p_i, Point2 p_j,
                          const QuadratureSpec& spec);

}  // namespace photocov
