#pragma once

#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/quadrature.hpp"
#include "photocov/sensor.hpp"

namespace photocov {

/// Coverage cost of a configuration over an explicit pair partition: the
/// sum over cells of the sensor-weighted density integral. Lower is better.
/// Throws std::invalid_argument("invalid partition") when the cell areas do
/// not add up to the region area (relative mismatch > 1e-4) and on keys
/// referencing missing agents.
double coverage_cost(const AgentConfiguration& agents, const OrderTwoPartition& partition,
                     const GaussianMixtureDensity& density, const SensorModel& sensor,
                     const QuadratureSpec& spec);

/// Photogrammetry cost over the second-order Voronoi partition; the penalty
/// constant uses the diameter of the region polygon.
double photogrammetry_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                           const GaussianMixtureDensity& density, double fov_radius,
                           const QuadratureSpec& spec);

/// Quadratic-sensor cost over the second-order Voronoi partition.
double auxiliary_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                      const GaussianMixtureDensity& density, const QuadratureSpec& spec);

}  // namespace photocov
