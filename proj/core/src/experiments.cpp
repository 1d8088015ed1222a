#include "photocov/experiments.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "photocov/cost.hpp"
#include "photocov/parallel.hpp"
#include "photocov/rng.hpp"

namespace photocov {

namespace {

struct OracleGrid {
  Point2 lo;
  double hx = 0.0, hy = 0.0;
  int resolution = 0;
  double sample_area = 0.0;
};

OracleGrid make_grid(const ConvexPolygon& region, const GridOracleSpec& spec) {
  if (spec.resolution < 64) throw std::invalid_argument("oracle resolution must be >= 64");
  const auto [lo, hi] = bounding_box(region);
  OracleGrid g;
  g.lo = lo;
  g.resolution = spec.resolution;
  g.hx = (hi.x - lo.x) / spec.resolution;
  g.hy = (hi.y - lo.y) / spec.resolution;
  g.sample_area = g.hx * g.hy;
  return g;
}

double pair_value(const AgentConfiguration& agents, const SensorModel& sensor, Point2 q,
                  PairKey key) {
  return sensor(distance(q, agents.positions[key.i]), distance(q, agents.positions[key.j]));
}

// Row-parallel accumulation with a sequential final reduction, so results
// do not depend on the worker count.
template <typename SampleCost>
double accumulate_rows(const ConvexPolygon& region, const OracleGrid& grid,
                       const SampleCost& sample_cost) {
  std::vector<double> row_sums(grid.resolution, 0.0);
  parallel_for(static_cast<std::size_t>(grid.resolution), [&](std::size_t row) {
    const double y = grid.lo.y + (static_cast<double>(row) + 0.5) * grid.hy;
    double sum = 0.0;
    for (int col = 0; col < grid.resolution; ++col) {
      const Point2 q{grid.lo.x + (col + 0.5) * grid.hx, y};
      if (!contains(region, q, 0.0)) continue;
      sum += sample_cost(static_cast<int>(row), col, q);
    }
    row_sums[row] = sum;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total * grid.sample_area;
}

}  // namespace

double oracle_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                   const GaussianMixtureDensity& density, const SensorModel& sensor,
                   const GridOracleSpec& spec) {
  validate_configuration(agents, region);
  const OracleGrid grid = make_grid(region, spec);
  return accumulate_rows(region, grid, [&](int, int, Point2 q) {
    const PairKey best = nearest_two_agents(agents, q);
    return pair_value(agents, sensor, q, best) * density.eval(q);
  });
}

double oracle_perturbed_partition_cost(const AgentConfiguration& agents,
                                       const ConvexPolygon& region,
                                       const GaussianMixtureDensity& density,
                                       const SensorModel& sensor, double swap_fraction,
                                       const GridOracleSpec& spec, PerturbMode mode) {
  if (swap_fraction < 0.0 || swap_fraction > 1.0)
    throw std::invalid_argument("swap fraction must be in [0, 1]");
  validate_configuration(agents, region);
  const int n = agents.count();
  const int pairs = pair_count(n);
  const OracleGrid grid = make_grid(region, spec);

  // Per-row RNG substreams keep the reassignment deterministic under row
  // parallelism.
  std::vector<Rng> row_rngs;
  row_rngs.reserve(grid.resolution);
  for (int row = 0; row < grid.resolution; ++row)
    row_rngs.emplace_back(Rng::substream(spec.seed, static_cast<std::uint64_t>(row)));

  return accumulate_rows(region, grid, [&](int row, int, Point2 q) {
    const PairKey best = nearest_two_agents(agents, q);
    PairKey assigned = best;
    if (pairs > 1) {
      Rng& rng = row_rngs[static_cast<std::size_t>(row)];
      const bool swap = rng.uniform01() < swap_fraction;
      if (swap) {
        if (mode == PerturbMode::RandomPair) {
          const int best_index = pair_index(best, n);
          int pick = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(pairs - 1)));
          if (pick >= best_index) ++pick;
          assigned = pair_from_index(pick, n);
        } else {
          double worst_value = -1.0;
          for (int k = 0; k < pairs; ++k) {
            const PairKey key = pair_from_index(k, n);
            const double value = pair_value(agents, sensor, q, key);
            if (value > worst_value) {
              worst_value = value;
              assigned = key;
            }
          }
        }
      }
    }
    return pair_value(agents, sensor, q, assigned) * density.eval(q);
  });
}

namespace {

ConfigurationCosts evaluate_configuration(const std::string& label,
                                          const AgentConfiguration& agents,
                                          const ConvexPolygon& region,
                                          const GaussianMixtureDensity& density,
                                          double fov_radius, double upper_factor,
                                          const QuadratureSpec& spec) {
  ConfigurationCosts out;
  out.label = label;
  out.positions = agents.positions;
  const OrderTwoPartition partition = order_two_voronoi(agents, region);
  for (const auto& [key, cell] : partition.cells)
    if (cell.empty()) ++out.empty_cells;
  const SensorModel photo = SensorModel::photogrammetry(fov_radius, polygon_diameter(region));
  out.photogrammetry_cost = coverage_cost(agents, partition, density, photo, spec);
  out.auxiliary_cost = coverage_cost(agents, partition, density, SensorModel::auxiliary(), spec);
  out.sandwich_ok = out.auxiliary_cost <= out.photogrammetry_cost &&
                    out.photogrammetry_cost <=
                        upper_factor * out.auxiliary_cost * (1.0 + 1e-9);
  return out;
}

}  // namespace

ComparisonReport compare_configurations(int n, const ConvexPolygon& region,
                                        const GaussianMixtureDensity& density, double fov_radius,
                                        const SimulationConfig& sim_config,
                                        const QuadratureSpec& spec) {
  if (n < 2) throw std::invalid_argument("second-order coverage requires n >= 2");
  ComparisonReport report;
  report.agent_count = n;
  report.fov_radius = fov_radius;
  report.seed = sim_config.seed;
  const BoundFactors bounds = bound_factors(fov_radius, polygon_diameter(region));
  report.beta = bounds.beta;
  report.upper_factor = bounds.upper_factor;

  const AgentConfiguration random = random_configuration(n, region, sim_config.seed);
  const AgentConfiguration grid = grid_configuration(n, region);
  const SimulationTrace trace = run(random, region, density, fov_radius, sim_config, spec);
  report.simulation_converged = trace.converged;
  report.simulation_steps = trace.steps_used;

  report.random = evaluate_configuration("random", random, region, density, fov_radius,
                                         bounds.upper_factor, spec);
  report.grid = evaluate_configuration("grid", grid, region, density, fov_radius,
                                       bounds.upper_factor, spec);
  report.coverage = evaluate_configuration("coverage", trace.final_configuration, region, density,
                                           fov_radius, bounds.upper_factor, spec);
  return report;
}

namespace {

nlohmann::json costs_to_json(const ConfigurationCosts& c) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : c.positions) positions.push_back({p.x, p.y});
  return {{"positions", positions},
          {"photogrammetry_cost", c.photogrammetry_cost},
          {"auxiliary_cost", c.auxiliary_cost},
          {"empty_cells", c.empty_cells},
          {"sandwich_ok", c.sandwich_ok}};
}

}  // namespace

std::string report_to_json(const ComparisonReport& report) {
  nlohmann::json j{{"agent_count", report.agent_count},
                   {"fov_radius", report.fov_radius},
                   {"seed", report.seed},
                   {"beta", report.beta},
                   {"upper_factor", report.upper_factor},
                   {"simulation_converged", report.simulation_converged},
                   {"simulation_steps", report.simulation_steps},
                   {"configurations",
                    {{"random", costs_to_json(report.random)},
                     {"grid", costs_to_json(report.grid)},
                     {"coverage", costs_to_json(report.coverage)}}}};
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const ComparisonReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report file: " + path);
  out << report_to_json(report);
}

}  // namespace photocov
