#include "photocov/sensor.hpp"

#include <cmath>
#include <stdexcept>

#include "photocov/rng.hpp"

namespace photocov {

double sensor_g(double x, double y) { return x * x + y * y; }

double sensor_h(double x, double y, double fov_radius, double region_diameter) {
  if (std::max(x, y) <= fov_radius) return x * x + y * y;
  return 2.0 * region_diameter * region_diameter;
}

SensorModel SensorModel::photogrammetry(double fov_radius, double region_diameter) {
  if (!(fov_radius >= 0.0)) throw std::invalid_argument("fov radius must be >= 0");
  if (!(region_diameter > 0.0)) throw std::invalid_argument("region diameter must be > 0");
  SensorModel s;
  s.kind = Kind::Photogrammetry;
  s.fov_radius = fov_radius;
  s.region_diameter = region_diameter;
  return s;
}

double SensorModel::operator()(double x, double y) const {
  if (kind == Kind::Auxiliary) return sensor_g(x, y);
  return sensor_h(x, y, fov_radius, region_diameter);
}

std::optional<int> SensorModel::branch(double x, double y) const {
  if (kind == Kind::Auxiliary) return std::nullopt;
  return std::max(x, y) <= fov_radius ? 0 : 1;
}

BoundFactors bound_factors(double fov_radius, double region_diameter) {
  if (!(fov_radius > 0.0) || !(fov_radius < region_diameter))
    throw std::invalid_argument("bound undefined");
  const double beta = fov_radius / (std::sqrt(2.0) * region_diameter);
  return BoundFactors{beta, 1.0 / (beta * beta)};
}

SensorConditionReport check_sensor_conditions(const std::function<double(double, double)>& sensor,
                                              double domain_scale, long samples,
                                              std::uint64_t seed) {
  Rng rng(seed);
  SensorConditionReport report;
  report.samples = samples;
  auto record = [&](long& counter, double x, double y, double k) {
    ++counter;
    if (!report.has_example) {
      report.has_example = true;
      report.example_x = x;
      report.example_y = y;
      report.example_k = k;
    }
  };
  for (long s = 0; s < samples; ++s) {
    const double x = rng.uniform(0.0, domain_scale);
    const double y = rng.uniform(0.0, domain_scale);
    const double k = rng.uniform(0.0, domain_scale);
    const double base = sensor(x, y);
    if (sensor(x + k, y) < base) record(report.monotone_x_violations, x, y, k);
    if (sensor(x, y + k) < base) record(report.monotone_y_violations, x, y, k);
    if (sensor(y, x) != base) record(report.symmetry_violations, x, y, k);
  }
  return report;
}

SensorConditionReport check_sensor_conditions(const SensorModel& sensor, long samples,
                                              std::uint64_t seed) {
  const double scale =
      sensor.kind == SensorModel::Kind::Photogrammetry ? sensor.region_diameter : 1.0;
  return check_sensor_conditions([&](double x, double y) { return sensor(x, y); }, scale, samples,
                                 seed);
}

}  // namespace photocov
