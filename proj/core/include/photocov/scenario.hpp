#pragma once

#include <string>
#include <vector>

#include "photocov/density.hpp"
#include "photocov/geometry.hpp"
#include "photocov/simulator.hpp"

namespace photocov {

/// Parsed scenario file: one JSON document defines a reproducible run.
/// Unknown keys are rejected at every level.
struct Scenario {
  ConvexPolygon region;
  GaussianMixtureDensity density;

  enum class InitMode { Random, Grid, Explicit };
  InitMode init = InitMode::Random;
  int agent_count = 0;
  std::vector<Point2> explicit_positions;

  double fov_radius = 0.0;
  SimulationConfig simulation;
  std::string output_directory = "out";
};

/// Parses and validates scenario JSON. base_dir resolves a relative density
/// path. Throws std::invalid_argument on any schema or value problem.
Scenario scenario_from_json(const std::string& text, const std::string& base_dir);

/// Loads a scenario file; density paths resolve relative to its directory.
Scenario load_scenario(const std::string& path);

/// Initial agent configuration per the scenario's init mode; random draws
/// use the simulation seed.
AgentConfiguration initial_configuration(const Scenario& scenario);

}  // namespace photocov
