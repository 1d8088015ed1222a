#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/sensor.hpp"
#include "photocov/simulator.hpp"

namespace photocov {

/// Brute-force cost oracle: midpoint sampling of the region bounding box.
struct GridOracleSpec {
  int resolution = 1000;  // samples per axis, >= 64
  std::uint64_t seed = 0;
};

/// Midpoint-rule coverage cost with every in-region sample assigned to its
/// two nearest agents (ties to the lowest indices). Independent of the
/// polygon-clipped integration path.
double oracle_cost(const AgentConfiguration& agents, const ConvexPolygon& region,
                   const GaussianMixtureDensity& density, const SensorModel& sensor,
                   const GridOracleSpec& spec);

enum class PerturbMode {
  RandomPair,  // reassign swapped samples to a uniformly random other pair
  WorstPair,   // reassign swapped samples to their costliest pair
};

/// As oracle_cost, but a swap_fraction share of samples is reassigned to a
/// non-optimal pair, producing a valid grid-level partition different from
/// the nearest-two assignment.
double oracle_perturbed_partition_cost(const AgentConfiguration& agents,
                                       const ConvexPolygon& region,
                                       const GaussianMixtureDensity& density,
                                       const SensorModel& sensor, double swap_fraction,
                                       const GridOracleSpec& spec,
                                       PerturbMode mode = PerturbMode::RandomPair);

struct ConfigurationCosts {
  std::string label;
  std::vector<Point2> positions;
  double photogrammetry_cost = 0.0;
  double auxiliary_cost = 0.0;
  int empty_cells = 0;
  bool sandwich_ok = false;  // auxiliary <= photogrammetry <= upper_factor * auxiliary
};

struct ComparisonReport {
  int agent_count = 0;
  double fov_radius = 0.0;
  std::uint64_t seed = 0;
  double beta = 0.0;
  double upper_factor = 0.0;
  bool simulation_converged = false;
  int simulation_steps = 0;
  ConfigurationCosts random;    // the seeded random initial configuration
  ConfigurationCosts grid;      // the lattice baseline
  ConfigurationCosts coverage;  // the simulator's final configuration

  bool all_sandwich_ok() const {
    return random.sandwich_ok && grid.sandwich_ok && coverage.sandwich_ok;
  }
};

/// Costs of the seeded random configuration, the lattice baseline, and the
/// converged coverage configuration started from that same random draw.
ComparisonReport compare_configurations(int n, const ConvexPolygon& region,
                                        const GaussianMixtureDensity& density, double fov_radius,
                                        const SimulationConfig& sim_config,
                                        const QuadratureSpec& spec);

std::string report_to_json(const ComparisonReport& report);
void write_report_json(const std::string& path, const ComparisonReport& report);

}  // namespace photocov
