#include "photocov/cost.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "photocov/parallel.hpp"

namespace photocov {

double coverage_cost(const AgentConfiguration& agents, const OrderTwoPartition& partition,
                     const GaussianMixtureDensity& density, const SensorModel& sensor,
                     const QuadratureSpec& spec) {
  const int n = agents.count();
  double cells_area = 0.0;
  for (const auto& [key, cell] : partition.cells) {
    if (key.i < 0 || key.i >= key.j || key.j >= n)
      throw std::invalid_argument("invalid partition");
    cells_area += polygon_area(cell);
  }
  const double region_area = polygon_area(partition.region);
  if (std::abs(cells_area - region_area) > 1e-4 * region_area)
    throw std::invalid_argument("invalid partition");

  std::vector<const ConvexPolygon*> cells;
  std::vector<PairKey> keys;
  cells.reserve(partition.cells.size());
  for (const auto& [key, cell] : partition.cells) {
    if (cell.empty()) continue;
    keys.push_back(key);
    cells.push_back(&cell);
  }
  std::vector<double> terms(cells.size(), 0.0);
  parallel_for(cells.size(), [&](std::size_t k) {
    terms[k] = cell_cost_integral(*cells[k], density, sensor, agents.positions[keys[k].i],
                                  agents.positions[keys[k].j], spec);
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

double photogrammetry_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                           const GaussianMixtureDensity& density, double fov_radius,
                           const QuadratureSpec& spec) {
  const SensorModel sensor = SensorModel::photogrammetry(fov_radius, polygon_diameter(region));
  return coverage_cost(agents, order_two_voronoi(agents, region), density, sensor, spec);
}

double auxiliary_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                      const GaussianMixtureDensity& density, const QuadratureSpec& spec) {
  return coverage_cost(agents, order_two_voronoi(agents, region), density,
                       SensorModel::auxiliary(), spec);
}

}  // namespace photocov
