#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photocov/controller.hpp"
#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/quadrature.hpp"

namespace photocov {

struct SimulationConfig {
  double dt = 0.05;               // seconds; dt * gain < 1 for a stable step
  double gain = 1.0;              // 1/second
  int max_steps = 5000;
  double convergence_eps = 1e-4;  // meters/second on the largest input norm
  int cost_record_stride = 10;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument("unstable step") when dt * gain >= 1, and
/// on non-positive dt, gain, eps or stride.
void validate_simulation_config(const SimulationConfig& config);

struct TraceRecord {
  int step = 0;
  double time = 0.0;  // seconds
  std::vector<Point2> positions;
  std::vector<double> input_norms;  // per agent, at this step
  double max_input_norm = 0.0;
  double auxiliary_cost = 0.0;
  double photogrammetry_cost = 0.0;
};

struct SimulationTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
  int steps_used = 0;
  AgentConfiguration final_configuration;
};

/// One synchronous Euler step: every input is computed from the same
/// configuration snapshot, positions move by dt * u and are clamped back to
/// the region if the step exits. Throws std::runtime_error("degenerate
/// step: reduce dt") when two agents coincide after the update.
AgentConfiguration step(const AgentConfiguration& agents, const ConvexPolygon& region,
                        const GaussianMixtureDensity& density, const SimulationConfig& config,
                        const QuadratureSpec& spec);

/// Iterates step until every input norm falls below convergence_eps or
/// max_steps is exhausted, recording costs every cost_record_stride steps
/// (plus the initial and final states). fov_radius parameterizes the
/// photogrammetry cost recorded along the trace.
SimulationTrace run(const AgentConfiguration& initial, const ConvexPolygon& region,
                    const GaussianMixtureDensity& density, double fov_radius,
                    const SimulationConfig& config, const QuadratureSpec& spec);

/// Uniform rejection sampling inside the region; deterministic per seed;
/// resamples any point closer than the degeneracy floor to an earlier one.
AgentConfiguration random_configuration(int n, const ConvexPolygon& region, std::uint64_t seed);

/// Cell-centered lattice baseline on a rectangular region: ceil(sqrt(n))
/// rows, the last row centered when partially filled. Throws
/// std::invalid_argument("grid baseline requires rectangle") otherwise.
AgentConfiguration grid_configuration(int n, const ConvexPolygon& region);

/// Per-agent trace CSV: step,time,agent,x,y,u_norm.
void write_trace_csv(const std::string& path, const SimulationTrace& trace);
/// Cost trace CSV: step,time,H_g,H_h,max_u.
void write_summary_csv(const std::string& path, const SimulationTrace& trace);

}  // namespace photocov
