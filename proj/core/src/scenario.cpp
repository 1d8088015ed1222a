#include "photocov/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace photocov {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void reject_unknown_keys(const json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known) fail("unknown key '" + key + "' in " + section);
  }
}

double number_field(const json& obj, const char* key, const std::string& section) {
  if (!obj.contains(key)) fail(section + " requires '" + key + "'");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(section + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(section + "." + key + " must be finite");
  return d;
}

Point2 point_field(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(what + " must be [x, y]");
  const Point2 p{v[0].get<double>(), v[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail(what + " must be finite");
  return p;
}

ConvexPolygon parse_region(const json& obj) {
  if (!obj.is_object()) fail("region must be an object");
  reject_unknown_keys(obj, "region", {"rect", "polygon"});
  if (obj.contains("rect") == obj.contains("polygon"))
    fail("region requires exactly one of 'rect' or 'polygon'");
  if (obj.contains("rect")) {
    const auto& r = obj.at("rect");
    if (!r.is_array() || r.size() != 2) fail("region.rect must be [[x0,y0],[x1,y1]]");
    const Point2 a = point_field(r[0], "region.rect corner");
    const Point2 b = point_field(r[1], "region.rect corner");
    if (std::abs(a.x - b.x) < 1e-12 || std::abs(a.y - b.y) < 1e-12)
      fail("region.rect corners must span a rectangle");
    return make_rectangle(a, b);
  }
  const auto& pv = obj.at("polygon");
  if (!pv.is_array() || pv.size() < 3) fail("region.polygon requires >= 3 vertices");
  ConvexPolygon poly;
  for (const auto& v : pv) poly.vertices.push_back(point_field(v, "region.polygon vertex"));
  if (polygon_area(poly) < 0.0) {
    std::reverse(poly.vertices.begin(), poly.vertices.end());
  }
  if (!is_convex_ccw(poly)) fail("region.polygon must be convex");
  if (!(polygon_area(poly) > 0.0)) fail("region.polygon must have positive area");
  return poly;
}

GaussianMixtureDensity parse_density(const json& obj, const std::string& base_dir) {
  if (!obj.is_object()) fail("density must be an object");
  if (obj.contains("path")) {
    reject_unknown_keys(obj, "density", {"path"});
    if (!obj.at("path").is_string()) fail("density.path must be a string");
    std::filesystem::path p = obj.at("path").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return read_density_json(p.string());
  }
  reject_unknown_keys(obj, "density", {"components", "floor"});
  return density_from_json(obj.dump());
}

}  // namespace

Scenario scenario_from_json(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!j.is_object()) fail("scenario must be a JSON object");
  reject_unknown_keys(j, "scenario",
                      {"region", "density", "agents", "sensor", "simulation", "output"});
  for (const char* required : {"region", "density", "agents", "sensor"})
    if (!j.contains(required)) fail(std::string("scenario requires '") + required + "'");

  Scenario s;
  s.region = parse_region(j.at("region"));
  s.density = parse_density(j.at("density"), base_dir);

  const auto& agents = j.at("agents");
  if (!agents.is_object()) fail("agents must be an object");
  reject_unknown_keys(agents, "agents", {"count", "init", "positions"});
  std::string init = "random";
  if (agents.contains("init")) {
    if (!agents.at("init").is_string()) fail("agents.init must be a string");
    init = agents.at("init").get<std::string>();
  }
  if (init == "random") {
    s.init = Scenario::InitMode::Random;
  } else if (init == "grid") {
    s.init = Scenario::InitMode::Grid;
  } else if (init == "explicit") {
    s.init = Scenario::InitMode::Explicit;
  } else {
    fail("agents.init must be one of random, grid, explicit");
  }
  if (s.init == Scenario::InitMode::Explicit) {
    if (!agents.contains("positions")) fail("agents.init explicit requires positions");
    for (const auto& v : agents.at("positions"))
      s.explicit_positions.push_back(point_field(v, "agents.positions entry"));
    s.agent_count = static_cast<int>(s.explicit_positions.size());
    if (agents.contains("count") &&
        agents.at("count").get<int>() != s.agent_count)
      fail("agents.count does not match the explicit positions");
  } else {
    if (agents.contains("positions")) fail("agents.positions requires init 'explicit'");
    if (!agents.contains("count")) fail("agents requires 'count'");
    if (!agents.at("count").is_number_integer()) fail("agents.count must be an integer");
    s.agent_count = agents.at("count").get<int>();
  }
  if (s.agent_count < 2) fail("second-order coverage requires n >= 2");

  const auto& sensor = j.at("sensor");
  if (!sensor.is_object()) fail("sensor must be an object");
  reject_unknown_keys(sensor, "sensor", {"fov_radius"});
  s.fov_radius = number_field(sensor, "fov_radius", "sensor");
  if (!(s.fov_radius > 0.0)) fail("sensor.fov_radius must be > 0");

  if (j.contains("simulation")) {
    const auto& sim = j.at("simulation");
    if (!sim.is_object()) fail("simulation must be an object");
    reject_unknown_keys(sim, "simulation",
                        {"dt", "gain", "max_steps", "convergence_eps", "seed"});
    if (sim.contains("dt")) s.simulation.dt = number_field(sim, "dt", "simulation");
    if (sim.contains("gain")) s.simulation.gain = number_field(sim, "gain", "simulation");
    if (sim.contains("max_steps")) {
      if (!sim.at("max_steps").is_number_integer())
        fail("simulation.max_steps must be an integer");
      s.simulation.max_steps = sim.at("max_steps").get<int>();
    }
    if (sim.contains("convergence_eps"))
      s.simulation.convergence_eps = number_field(sim, "convergence_eps", "simulation");
    if (sim.contains("seed")) {
      if (!sim.at("seed").is_number_integer()) fail("simulation.seed must be an integer");
      s.simulation.seed = sim.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    if (!out.is_object()) fail("output must be an object");
    reject_unknown_keys(out, "output", {"directory", "stride"});
    if (out.contains("directory")) {
      if (!out.at("directory").is_string()) fail("output.directory must be a string");
      s.output_directory = out.at("directory").get<std::string>();
    }
    if (out.contains("stride")) {
      if (!out.at("stride").is_number_integer()) fail("output.stride must be an integer");
      s.simulation.cost_record_stride = out.at("stride").get<int>();
    }
  }
  validate_simulation_config(s.simulation);

  if (s.init == Scenario::InitMode::Explicit) {
    AgentConfiguration explicit_agents{s.explicit_positions};
    validate_configuration(explicit_agents, s.region);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string base = std::filesystem::path(path).parent_path().string();
  return scenario_from_json(ss.str(), base.empty() ? "." : base);
}

AgentConfiguration initial_configuration(const Scenario& scenario) {
  switch (scenario.init) {
    case Scenario::InitMode::Random:
      return random_configuration(scenario.agent_count, scenario.region,
                                  scenario.simulation.seed);
    case Scenario::InitMode::Grid:
      return grid_configuration(scenario.agent_count, scenario.region);
    case Scenario::InitMode::Explicit:
      return AgentConfiguration{scenario.explicit_positions};
  }
  fail("unreachable init mode");
}

}  // namespace photocov
