#include "photocov/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "photocov/cost.hpp"
#include "photocov/rng.hpp"

namespace photocov {

void validate_simulation_config(const SimulationConfig& config) {
  if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(config.gain > 0.0)) throw std::invalid_argument("gain must be > 0");
  if (!(config.dt * config.gain < 1.0)) throw std::invalid_argument("unstable step");
  if (config.max_steps < 0) throw std::invalid_argument("max_steps must be >= 0");
  if (!(config.convergence_eps > 0.0)) throw std::invalid_argument("convergence_eps must be > 0");
  if (config.cost_record_stride < 1) throw std::invalid_argument("stride must be >= 1");
}

namespace {

AgentConfiguration apply_inputs(const AgentConfiguration& agents, const ConvexPolygon& region,
                                const std::vector<ControlInput>& inputs, double dt) {
  AgentConfiguration next = agents;
  for (int i = 0; i < agents.count(); ++i) {
    Point2 p = agents.positions[i] + inputs[i] * dt;
    if (!contains(region, p, 0.0)) p = closest_point_in_polygon(region, p);
    next.positions[i] = p;
  }
  const auto& pos = next.positions;
  for (std::size_t a = 0; a + 1 < pos.size(); ++a)
    for (std::size_t b = a + 1; b < pos.size(); ++b)
      if (distance(pos[a], pos[b]) <= kAgentDegeneracyFloor)
        throw std::runtime_error("degenerate step: reduce dt");
  return next;
}

double max_norm(const std::vector<ControlInput>& inputs) {
  double best = 0.0;
  for (const auto& u : inputs) best = std::max(best, u.norm());
  return best;
}

}  // namespace

AgentConfiguration step(const AgentConfiguration& agents, const ConvexPolygon& region,
                        const GaussianMixtureDensity& density, const SimulationConfig& config,
                        const QuadratureSpec& spec) {
  validate_simulation_config(config);
  const OrderTwoPartition partition = order_two_voronoi(agents, region);
  const ControllerParams params{config.gain, kMassFloor};
  const auto inputs = control_inputs(agents, partition, density, params, spec);
  return apply_inputs(agents, region, inputs, config.dt);
}

SimulationTrace run(const AgentConfiguration& initial, const ConvexPolygon& region,
                    const GaussianMixtureDensity& density, double fov_radius,
                    const SimulationConfig& config, const QuadratureSpec& spec) {
  validate_simulation_config(config);
  const SensorModel photo_sensor =
      SensorModel::photogrammetry(fov_radius, polygon_diameter(region));
  const ControllerParams params{config.gain, kMassFloor};

  SimulationTrace trace;
  AgentConfiguration agents = initial;
  for (int s = 0;; ++s) {
    const OrderTwoPartition partition = order_two_voronoi(agents, region);
    const auto inputs = control_inputs(agents, partition, density, params, spec);
    const double maxu = max_norm(inputs);
    const bool at_limit = s == config.max_steps;
    const bool at_rest = maxu < config.convergence_eps;
    if (s % config.cost_record_stride == 0 || at_limit || at_rest) {
      TraceRecord rec;
      rec.step = s;
      rec.time = s * config.dt;
      rec.positions = agents.positions;
      rec.input_norms.reserve(inputs.size());
      for (const auto& u : inputs) rec.input_norms.push_back(u.norm());
      rec.max_input_norm = maxu;
      rec.auxiliary_cost =
          coverage_cost(agents, partition, density, SensorModel::auxiliary(), spec);
      rec.photogrammetry_cost = coverage_cost(agents, partition, density, photo_sensor, spec);
      if (trace.records.empty() || trace.records.back().step != s)
        trace.records.push_back(std::move(rec));
    }
    if (at_limit) {
      trace.converged = false;
      trace.steps_used = s;
      break;
    }
    if (at_rest) {
      trace.converged = true;
      trace.steps_used = s;
      break;
    }
    agents = apply_inputs(agents, region, inputs, config.dt);
  }
  trace.final_configuration = agents;
  return trace;
}

AgentConfiguration random_configuration(int n, const ConvexPolygon& region, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("second-order coverage requires n >= 2");
  if (region.size() < 3) throw std::invalid_argument("empty region");
  Rng rng(seed);
  const auto [lo, hi] = bounding_box(region);
  AgentConfiguration agents;
  agents.positions.reserve(n);
  while (agents.count() < n) {
    const Point2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
    if (!contains(region, p, 0.0)) continue;
    bool distinct = true;
    for (const auto& q : agents.positions)
      if (distance(p, q) <= kAgentDegeneracyFloor) distinct = false;
    if (distinct) agents.positions.push_back(p);
  }
  return agents;
}

AgentConfiguration grid_configuration(int n, const ConvexPolygon& region) {
  if (n < 1) throw std::invalid_argument("grid baseline requires n >= 1");
  if (!is_rectangle(region)) throw std::invalid_argument("grid baseline requires rectangle");

  // Lattice frame along the rectangle's sides (axis-aligned in practice).
  const Point2 origin = region.vertices[0];
  const Vec2 side_u = region.vertices[1] - region.vertices[0];
  const Vec2 side_v = region.vertices[3] - region.vertices[0];

  const int rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int cols = (n + rows - 1) / rows;
  AgentConfiguration agents;
  agents.positions.reserve(n);
  for (int r = 0; r < rows && agents.count() < n; ++r) {
    const int in_row = std::min(cols, n - r * cols);
    // Center a partially filled last row.
    const double row_shift = (cols - in_row) * 0.5;
    for (int c = 0; c < in_row; ++c) {
      const double fu = (c + row_shift + 0.5) / cols;
      const double fv = (r + 0.5) / rows;
      agents.positions.push_back(origin + side_u * fu + side_v * fv);
    }
  }
  return agents;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_number(std::string& out, int v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace

void write_trace_csv(const std::string& path, const SimulationTrace& trace) {
  std::string text = "step,time,agent,x,y,u_norm\n";
  for (const auto& rec : trace.records) {
    for (std::size_t a = 0; a < rec.positions.size(); ++a) {
      append_number(text, rec.step);
      text += ',';
      append_number(text, rec.time);
      text += ',';
      append_number(text, static_cast<int>(a));
      text += ',';
      append_number(text, rec.positions[a].x);
      text += ',';
      append_number(text, rec.positions[a].y);
      text += ',';
      append_number(text, rec.input_norms[a]);
      text += '\n';
    }
  }
  write_text(path, text);
}

void write_summary_csv(const std::string& path, const SimulationTrace& trace) {
  std::string text = "step,time,H_g,H_h,max_u\n";
  for (const auto& rec : trace.records) {
    append_number(text, rec.step);
    text += ',';
    append_number(text, rec.time);
    text += ',';
    append_number(text, rec.auxiliary_cost);
    text += ',';
    append_number(text, rec.photogrammetry_cost);
    text += ',';
    append_number(text, rec.max_input_norm);
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace photocov
