#pragma once

#include <vector>

#include "photocov/cost.hpp"
#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/quadrature.hpp"

namespace photocov {

using ControlInput = Vec2;  // meters/second

struct ControllerParams {
  double gain = 1.0;         // 1/second, > 0
  double mass_floor = kMassFloor;
};

/// Mass-weighted mean of the centroids of every cell assigned to agent i;
/// empty cells contribute nothing. Throws std::runtime_error("massless
/// agent") when the total mass over the agent's cells is at or below
/// mass_floor.
Point2 additive_centroid(int agent, const OrderTwoPartition& partition,
                         const GaussianMixtureDensity& density, const QuadratureSpec& spec,
                         double mass_floor = kMassFloor);

/// u_i = -gain * (p_i - additive centroid of i). A massless agent holds
/// position (zero input).
ControlInput control_input(int agent, const AgentConfiguration& agents,
                           const ConvexPolygon& region, const GaussianMixtureDensity& density,
                           const ControllerParams& params, const QuadratureSpec& spec);

/// All control inputs from one shared partition (cell integrals are
/// evaluated once and reused across the pair's two agents).
std::vector<ControlInput> control_inputs(const AgentConfiguration& agents,
                                         const OrderTwoPartition& partition,
                                         const GaussianMixtureDensity& density,
                                         const ControllerParams& params,
                                         const QuadratureSpec& spec);

enum class CostKind { Auxiliary, Photogrammetry };

/// Central-difference gradient of the composite cost P -> H(P, V(P)^2) with
/// respect to agent i's position, rebuilding the partition at every
/// perturbed configuration. fov_radius is used by the Photogrammetry cost
/// only. Throws std::invalid_argument("step exits region") when a perturbed
/// position leaves the region.
Vec2 fd_gradient(CostKind kind, const AgentConfiguration& agents, const ConvexPolygon& region,
                 const GaussianMixtureDensity& density, int agent, double h_step,
                 const QuadratureSpec& spec, double fov_radius = 0.0);

}  // namespace photocov
