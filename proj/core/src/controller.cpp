#include "photocov/controller.hpp"

#include <stdexcept>

#include "photocov/parallel.hpp"

namespace photocov {

namespace {

struct CellMomentTable {
  std::vector<PairKey> keys;
  std::vector<CellMoments> moments;
};

CellMomentTable moments_of_nonempty_cells(const OrderTwoPartition& partition,
                                          const GaussianMixtureDensity& density,
                                          const QuadratureSpec& spec) {
  CellMomentTable table;
  std::vector<const ConvexPolygon*> cells;
  for (const auto& [key, cell] : partition.cells) {
    if (cell.empty()) continue;
    table.keys.push_back(key);
    cells.push_back(&cell);
  }
  table.moments.resize(cells.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    table.moments[k] = cell_moments(*cells[k], density, spec);
  });
  return table;
}

Point2 centroid_from_table(int agent, const CellMomentTable& table, double mass_floor) {
  double mass = 0.0;
  Vec2 weighted{0.0, 0.0};
  for (std::size_t k = 0; k < table.keys.size(); ++k) {
    if (table.keys[k].i != agent && table.keys[k].j != agent) continue;
    mass += table.moments[k].mass;
    weighted += table.moments[k].first_moment;
  }
  if (!(mass > mass_floor)) throw std::runtime_error("massless agent");
  return weighted / mass;
}

}  // namespace

Point2 additive_centroid(int agent, const OrderTwoPartition& partition,
                         const GaussianMixtureDensity& density, const QuadratureSpec& spec,
                         double mass_floor) {
  return centroid_from_table(agent, moments_of_nonempty_cells(partition, density, spec),
                             mass_floor);
}

std::vector<ControlInput> control_inputs(const AgentConfiguration& agents,
                                         const OrderTwoPartition& partition,
                                         const GaussianMixtureDensity& density,
                                         const ControllerParams& params,
                                         const QuadratureSpec& spec) {
  if (!(params.gain > 0.0)) throw std::invalid_argument("controller gain must be > 0");
  const CellMomentTable table = moments_of_nonempty_cells(partition, density, spec);
  std::vector<ControlInput> inputs(agents.positions.size());
  for (int i = 0; i < agents.count(); ++i) {
    try {
      const Point2 target = centroid_from_table(i, table, params.mass_floor);
      inputs[i] = (agents.positions[i] - target) * -params.gain;
    } catch (const std::runtime_error&) {
      inputs[i] = {0.0, 0.0};  // massless agent holds position
    }
  }
  return inputs;
}

ControlInput control_input(int agent, const AgentConfiguration& agents,
                           const ConvexPolygon& region, const GaussianMixtureDensity& density,
                           const ControllerParams& params, const QuadratureSpec& spec) {
  const OrderTwoPartition partition = order_two_voronoi(agents, region);
  return control_inputs(agents, partition, density, params, spec)[agent];
}

Vec2 fd_gradient(CostKind kind, const AgentConfiguration& agents, const ConvexPolygon& region,
                 const GaussianMixtureDensity& density, int agent, double h_step,
                 const QuadratureSpec& spec, double fov_radius) {
  if (!(h_step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  auto composite_cost = [&](const AgentConfiguration& p) {
    if (kind == CostKind::Auxiliary) return auxiliary_cost(p, region, density, spec);
    return photogrammetry_cost(p, region, density, fov_radius, spec);
  };
  Vec2 grad;
  for (int axis = 0; axis < 2; ++axis) {
    const Vec2 step = axis == 0 ? Vec2{h_step, 0.0} : Vec2{0.0, h_step};
    AgentConfiguration plus = agents;
    AgentConfiguration minus = agents;
    plus.positions[agent] += step;
    minus.positions[agent] -= step;
    if (!contains(region, plus.positions[agent], 0.0) ||
        !contains(region, minus.positions[agent], 0.0))
      throw std::invalid_argument("step exits region");
    const double delta = composite_cost(plus) - composite_cost(minus);
    (axis == 0 ? grad.x : grad.y) = delta / (2.0 * h_step);
  }
  return grad;
}

}  // namespace photocov
