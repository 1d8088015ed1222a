// photocov: plan and evaluate multi-agent imaging configurations by
// second-order coverage control over a feature-density field.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "photocov/controller.hpp"
#include "photocov/cost.hpp"
#include "photocov/density.hpp"
#include "photocov/experiments.hpp"
#include "photocov/rng.hpp"
#include "photocov/scenario.hpp"
#include "photocov/sensor.hpp"
#include "photocov/simulator.hpp"
#include "photocov/svg.hpp"

namespace pc = photocov;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void print_error(const std::string& message) { std::cerr << "error: " << message << "\n"; }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

pc::Scenario load_with_overrides(const std::string& path, std::optional<std::uint64_t> seed,
                                 std::optional<std::string> out_dir) {
  pc::Scenario scenario = pc::load_scenario(path);
  if (seed) scenario.simulation.seed = *seed;
  if (out_dir) scenario.output_directory = *out_dir;
  return scenario;
}

int cmd_simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed,
                 std::optional<std::string> out_dir) {
  const pc::Scenario scenario = load_with_overrides(scenario_path, seed, out_dir);
  const pc::AgentConfiguration initial = pc::initial_configuration(scenario);
  const pc::QuadratureSpec quad;

  const pc::SimulationTrace trace = pc::run(initial, scenario.region, scenario.density,
                                            scenario.fov_radius, scenario.simulation, quad);
  const pc::OrderTwoPartition final_partition =
      pc::order_two_voronoi(trace.final_configuration, scenario.region);

  const fs::path dir = scenario.output_directory;
  fs::create_directories(dir);
  pc::write_trace_csv((dir / "trace.csv").string(), trace);
  pc::write_summary_csv((dir / "summary.csv").string(), trace);
  pc::write_simulation_figure((dir / "figure.svg").string(), scenario.region, scenario.density,
                              trace, final_partition);

  const auto& first = trace.records.front();
  const auto& last = trace.records.back();
  json positions = json::array();
  for (const auto& p : trace.final_configuration.positions) positions.push_back({p.x, p.y});
  const pc::BoundFactors bounds =
      pc::bound_factors(scenario.fov_radius, pc::polygon_diameter(scenario.region));
  json summary{{"agent_count", scenario.agent_count},
               {"seed", scenario.simulation.seed},
               {"fov_radius", scenario.fov_radius},
               {"converged", trace.converged},
               {"steps", trace.steps_used},
               {"beta", bounds.beta},
               {"upper_factor", bounds.upper_factor},
               {"initial",
                {{"auxiliary_cost", first.auxiliary_cost},
                 {"photogrammetry_cost", first.photogrammetry_cost},
                 {"max_input_norm", first.max_input_norm}}},
               {"final",
                {{"auxiliary_cost", last.auxiliary_cost},
                 {"photogrammetry_cost", last.photogrammetry_cost},
                 {"max_input_norm", last.max_input_norm}}},
               {"final_positions", positions},
               {"files", {"trace.csv", "summary.csv", "summary.json", "figure.svg"}}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "simulate: " << (trace.converged ? "converged" : "step limit") << " after "
            << trace.steps_used << " steps\n"
            << "  auxiliary cost      " << first.auxiliary_cost << " -> " << last.auxiliary_cost
            << "\n"
            << "  photogrammetry cost " << first.photogrammetry_cost << " -> "
            << last.photogrammetry_cost << "\n"
            << "  outputs in " << dir.string() << "\n";
  return 0;
}

int cmd_fit_density(const std::string& csv_path, int k, std::uint64_t seed,
                    const std::string& out_path) {
  const auto measurements = pc::read_measurements_csv(csv_path);
  const pc::FitResult fit = pc::fit_mixture_detailed(measurements, k, seed);
  pc::write_density_json(out_path, fit.density);

  json report{{"k", k},
              {"seed", seed},
              {"measurement_count", measurements.size()},
              {"residual", fit.residual},
              {"initial_residual", fit.initial_residual},
              {"iterations", fit.iterations}};
  const std::string report_path = out_path + ".report.json";
  write_file(report_path, report.dump(2) + "\n");

  std::cout << "fit-density: residual " << fit.residual << " after " << fit.iterations
            << " accepted steps\n";
  for (std::size_t c = 0; c < fit.density.components.size(); ++c) {
    const auto& comp = fit.density.components[c];
    std::cout << "  component " << c << ": amplitude " << comp.amplitude << ", center ("
              << comp.center.x << ", " << comp.center.y << "), sigma " << comp.sigma << "\n";
  }
  std::cout << "  density written to " << out_path << ", report to " << report_path << "\n";
  return 0;
}

int cmd_compare(const std::string& scenario_path, std::optional<std::uint64_t> seed) {
  const pc::Scenario scenario = load_with_overrides(scenario_path, seed, std::nullopt);
  const pc::QuadratureSpec quad;
  const pc::ComparisonReport report =
      pc::compare_configurations(scenario.agent_count, scenario.region, scenario.density,
                                 scenario.fov_radius, scenario.simulation, quad);

  const fs::path dir = scenario.output_directory;
  fs::create_directories(dir);
  pc::write_report_json((dir / "report.json").string(), report);

  std::printf("%-10s %16s %16s %12s\n", "config", "photogrammetry", "auxiliary", "empty cells");
  for (const auto* c : {&report.random, &report.grid, &report.coverage}) {
    std::printf("%-10s %16.6f %16.6f %12d\n", c->label.c_str(), c->photogrammetry_cost,
                c->auxiliary_cost, c->empty_cells);
  }
  std::cout << "report written to " << (dir / "report.json").string() << "\n";
  return 0;
}

int cmd_eval_cost(const std::string& scenario_path, std::optional<std::uint64_t> seed) {
  const pc::Scenario scenario = load_with_overrides(scenario_path, seed, std::nullopt);
  const pc::AgentConfiguration agents = pc::initial_configuration(scenario);
  const pc::QuadratureSpec quad;

  const pc::OrderTwoPartition partition = pc::order_two_voronoi(agents, scenario.region);
  int empty_cells = 0;
  for (const auto& [key, cell] : partition.cells)
    if (cell.empty()) ++empty_cells;
  const double diam = pc::polygon_diameter(scenario.region);
  const double photo =
      pc::coverage_cost(agents, partition, scenario.density,
                        pc::SensorModel::photogrammetry(scenario.fov_radius, diam), quad);
  const double aux = pc::coverage_cost(agents, partition, scenario.density,
                                       pc::SensorModel::auxiliary(), quad);
  const pc::BoundFactors bounds = pc::bound_factors(scenario.fov_radius, diam);

  json positions = json::array();
  for (const auto& p : agents.positions) positions.push_back({p.x, p.y});
  json out{{"agent_count", scenario.agent_count},
           {"seed", scenario.simulation.seed},
           {"fov_radius", scenario.fov_radius},
           {"photogrammetry_cost", photo},
           {"auxiliary_cost", aux},
           {"beta", bounds.beta},
           {"upper_factor", bounds.upper_factor},
           {"empty_cells", empty_cells},
           {"positions", positions}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// Fixed verification setup mirroring the simulation-scale constants: the
// 1.5 x 1.5 region with a single density peak and fov radius 0.5.
struct VerifyContext {
  pc::ConvexPolygon region = pc::make_rectangle({0.0, 0.0}, {1.5, 1.5});
  pc::GaussianMixtureDensity density{{{1.0, {0.8, 0.65}, 0.25}}, 1e-3};
  double fov_radius = 0.5;
};

int report_violation(const std::string& suite, const json& instance) {
  const std::string path = "verify_violation.json";
  json j{{"suite", suite}, {"instance", instance}};
  write_file(path, j.dump(2) + "\n");
  print_error("verify " + suite + " violation; instance written to " + path);
  return 3;
}

json config_json(const pc::AgentConfiguration& agents) {
  json positions = json::array();
  for (const auto& p : agents.positions) positions.push_back({p.x, p.y});
  return positions;
}

int verify_bounds(int trials, std::uint64_t seed) {
  const VerifyContext ctx;
  const double diam = pc::polygon_diameter(ctx.region);
  const pc::BoundFactors bounds = pc::bound_factors(ctx.fov_radius, diam);
  const pc::QuadratureSpec quad{7, 6, 1e-4};
  double worst_ratio = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = 3 + t % 10;
    const auto agents =
        pc::random_configuration(n, ctx.region, pc::Rng::substream(seed, t));
    const double aux = pc::auxiliary_cost(agents, ctx.region, ctx.density, quad);
    const double photo =
        pc::photogrammetry_cost(agents, ctx.region, ctx.density, ctx.fov_radius, quad);
    worst_ratio = std::max(worst_ratio, photo / aux);
    const bool ok =
        aux <= photo && photo <= bounds.upper_factor * aux * (1.0 + 1e-9);
    if (!ok) {
      return report_violation("bounds", {{"positions", config_json(agents)},
                                         {"auxiliary_cost", aux},
                                         {"photogrammetry_cost", photo},
                                         {"upper_factor", bounds.upper_factor}});
    }
  }
  std::cout << "bounds: " << trials << " trials passed; worst photogrammetry/auxiliary ratio "
            << worst_ratio << " (bound " << bounds.upper_factor << ")\n";
  return 0;
}

int verify_lemma1(int trials, std::uint64_t seed) {
  const VerifyContext ctx;
  const double diam = pc::polygon_diameter(ctx.region);
  const pc::SensorModel photo = pc::SensorModel::photogrammetry(ctx.fov_radius, diam);
  double min_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const int n = 3 + t % 6;
    const auto agents =
        pc::random_configuration(n, ctx.region, pc::Rng::substream(seed, t));
    pc::GridOracleSpec oracle{500, pc::Rng::substream(seed ^ 0xABCDu, t)};
    const double optimal = pc::oracle_cost(agents, ctx.region, ctx.density, photo, oracle);
    for (int p = 0; p < 4; ++p) {
      oracle.seed = pc::Rng::substream(seed + 17, t * 8 + p);
      const double swap = p == 3 ? 1.0 : 0.2;
      const auto mode = p == 3 ? pc::PerturbMode::WorstPair : pc::PerturbMode::RandomPair;
      const double perturbed = pc::oracle_perturbed_partition_cost(
          agents, ctx.region, ctx.density, photo, swap, oracle, mode);
      min_margin = std::min(min_margin, perturbed - optimal);
      if (perturbed < optimal) {
        return report_violation("lemma1", {{"positions", config_json(agents)},
                                           {"optimal", optimal},
                                           {"perturbed", perturbed},
                                           {"swap_fraction", swap}});
      }
    }
  }
  std::cout << "lemma1: " << trials
            << " trials passed; smallest perturbed-minus-optimal margin " << min_margin << "\n";
  return 0;
}

int verify_gradient(int trials, std::uint64_t seed) {
  const VerifyContext ctx;
  const double diam = pc::polygon_diameter(ctx.region);
  const pc::QuadratureSpec quad{7, 6, 1e-9};
  const double h_step = 1e-5 * diam;
  const pc::ConvexPolygon inset = pc::make_rectangle({0.08, 0.08}, {1.42, 1.42});
  double max_angle = 0.0, max_magnitude = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int n = 4 + t % 6;
    const auto agents = pc::random_configuration(n, inset, pc::Rng::substream(seed, t));
    const int i = static_cast<int>(t % n);
    const auto partition = pc::order_two_voronoi(agents, ctx.region);

    double total_mass = 0.0;
    for (const auto& [key, cell] : partition.cells) {
      if (cell.empty() || (key.i != i && key.j != i)) continue;
      total_mass += pc::cell_mass(cell, ctx.density, quad);
    }
    const pc::Point2 centroid = pc::additive_centroid(i, partition, ctx.density, quad);
    const pc::Vec2 closed_form = (agents.positions[i] - centroid) * (2.0 * total_mass);
    const pc::Vec2 fd = pc::fd_gradient(pc::CostKind::Auxiliary, agents, ctx.region, ctx.density,
                                        i, h_step, quad);

    const double angle = std::acos(std::clamp(
        closed_form.dot(fd) / (closed_form.norm() * fd.norm()), -1.0, 1.0));
    const double magnitude = std::abs(fd.norm() - closed_form.norm()) / closed_form.norm();
    max_angle = std::max(max_angle, angle);
    max_magnitude = std::max(max_magnitude, magnitude);
    if (angle >= 1e-2 || magnitude >= 1e-3) {
      return report_violation("gradient", {{"positions", config_json(agents)},
                                           {"agent", i},
                                           {"angle_error", angle},
                                           {"magnitude_error", magnitude}});
    }
  }
  std::cout << "gradient: " << trials << " trials passed; max angle error " << max_angle
            << " rad, max magnitude error " << max_magnitude << "\n";
  return 0;
}

int verify_conditions(long samples, std::uint64_t seed) {
  const VerifyContext ctx;
  const double diam = pc::polygon_diameter(ctx.region);
  const auto sensor = pc::SensorModel::photogrammetry(ctx.fov_radius, diam);
  const auto report = pc::check_sensor_conditions(sensor, samples, seed);
  if (!report.passed()) {
    return report_violation("conditions", {{"x", report.example_x},
                                           {"y", report.example_y},
                                           {"k", report.example_k},
                                           {"violations", report.total_violations()}});
  }
  std::cout << "conditions: " << samples << " samples passed (monotonicity and symmetry)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order coverage planning for multi-agent photogrammetry"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string csv_path;
  std::string out_path = "density.json";
  std::string suite;
  int k = 1;
  int trials = 0;
  std::uint64_t seed_value = 0;
  bool seed_given = false;
  std::string out_dir;
  bool out_dir_given = false;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write trace/figure outputs");
  simulate->add_option("scenario", scenario_path, "Scenario JSON path")->required();
  simulate->add_option("--seed", seed_value, "Override the scenario seed")
      ->each([&](const std::string&) { seed_given = true; });
  simulate->add_option("--out-dir", out_dir, "Override the scenario output directory")
      ->each([&](const std::string&) { out_dir_given = true; });

  auto* fit = app.add_subcommand("fit-density", "Least-squares fit of a Gaussian mixture to x,y,count CSV");
  fit->add_option("measurements", csv_path, "Measurements CSV path")->required();
  fit->add_option("--k", k, "Number of mixture components")->default_val(1);
  fit->add_option("--seed", seed_value, "Random-restart seed");
  fit->add_option("--out", out_path, "Output density JSON path")->default_val("density.json");

  auto* compare = app.add_subcommand("compare", "Compare random, grid, and coverage configurations");
  compare->add_option("scenario", scenario_path, "Scenario JSON path")->required();
  compare->add_option("--seed", seed_value, "Override the scenario seed")
      ->each([&](const std::string&) { seed_given = true; });

  auto* verify = app.add_subcommand("verify", "Numerical verification suites");
  verify->add_option("--suite", suite, "bounds | lemma1 | gradient | conditions")->required();
  verify->add_option("--trials", trials, "Trial count (0 = suite default)")->default_val(0);
  verify->add_option("--seed", seed_value, "Base seed");

  auto* eval = app.add_subcommand("eval-cost", "Evaluate costs of the scenario's configuration");
  eval->add_option("scenario", scenario_path, "Scenario JSON path")->required();
  eval->add_option("--seed", seed_value, "Override the scenario seed")
      ->each([&](const std::string&) { seed_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(e.what());
    return 1;
  }

  std::optional<std::uint64_t> seed;
  if (seed_given) seed.emplace(seed_value);
  try {
    if (simulate->parsed()) {
      return cmd_simulate(scenario_path, seed,
                          out_dir_given ? std::optional<std::string>(out_dir) : std::nullopt);
    }
    if (fit->parsed()) return cmd_fit_density(csv_path, k, seed_value, out_path);
    if (compare->parsed()) return cmd_compare(scenario_path, seed);
    if (eval->parsed()) return cmd_eval_cost(scenario_path, seed);
    if (verify->parsed()) {
      if (suite == "bounds") return verify_bounds(trials > 0 ? trials : 100, seed_value);
      if (suite == "lemma1") return verify_lemma1(trials > 0 ? trials : 20, seed_value);
      if (suite == "gradient") return verify_gradient(trials > 0 ? trials : 30, seed_value);
      if (suite == "conditions")
        return verify_conditions(trials > 0 ? trials : 100000, seed_value);
      throw std::invalid_argument("unknown verify suite: " + suite);
    }
  } catch (const std::invalid_argument& e) {
    print_error(e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(e.what());
    return 2;
  }
  return 0;
}
