#include "photocov/density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "photocov/rng.hpp"

namespace photocov {

double GaussianMixtureDensity::eval(Point2 q) const {
  double value = floor;
  for (const auto& c : components) {
    const double d2 = squared_distance(q, c.center);
    value += c.amplitude * std::exp(-d2 / (2.0 * c.sigma * c.sigma));
  }
  return value;
}

double mixture_residual(const GaussianMixtureDensity& density,
                        const std::vector<FeatureMeasurement>& measurements) {
  double sum = 0.0;
  for (const auto& m : measurements) {
    const double r = density.eval(m.location) - m.feature_count;
    sum += r * r;
  }
  return sum;
}

namespace {

// Solve A x = b in place by LU with partial pivoting; A is n x n row-major.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
    if (std::abs(a[pivot * n + col]) < 1e-300) throw std::runtime_error("singular normal equations");
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      a[row * n + col] = 0.0;
      for (int k = col + 1; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < n; ++k) s -= a[row * n + k] * x[k];
    x[row] = s / a[row * n + row];
  }
  return x;
}

GaussianMixtureDensity unpack(const std::vector<double>& theta, int k) {
  GaussianMixtureDensity d;
  d.components.resize(k);
  for (int c = 0; c < k; ++c) {
    d.components[c].amplitude = theta[4 * c + 0];
    d.components[c].center = {theta[4 * c + 1], theta[4 * c + 2]};
    d.components[c].sigma = theta[4 * c + 3];
  }
  return d;
}

bool params_valid(const std::vector<double>& theta, int k) {
  for (int c = 0; c < k; ++c) {
    if (!(theta[4 * c + 0] > 0.0) || !(theta[4 * c + 3] > 0.0)) return false;
    for (int f = 0; f < 4; ++f)
      if (!std::isfinite(theta[4 * c + f])) return false;
  }
  return true;
}

struct LocalFit {
  std::vector<double> theta;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

// Damped Gauss-Newton on sum_m (phi(q_m) - count_m)^2. Damping is
// multiplicative: x10 when a step would increase the residual (step
// rejected), /10 when it decreases.
LocalFit gauss_newton(const std::vector<FeatureMeasurement>& meas, std::vector<double> theta,
                      int k) {
  constexpr int kMaxIterations = 200;
  constexpr double kStepStop = 1e-10;
  const int n_params = 4 * k;
  const int n_meas = static_cast<int>(meas.size());

  auto residual_of = [&](const std::vector<double>& th) {
    return mixture_residual(unpack(th, k), meas);
  };

  LocalFit fit;
  fit.theta = theta;
  fit.residual = residual_of(theta);
  fit.history.push_back(fit.residual);

  double damping = 1e-3;
  std::vector<double> jtj(n_params * n_params);
  std::vector<double> jtr(n_params);
  std::vector<double> jac_row(n_params);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::fill(jtj.begin(), jtj.end(), 0.0);
    std::fill(jtr.begin(), jtr.end(), 0.0);
    for (int m = 0; m < n_meas; ++m) {
      const Point2 q = meas[m].location;
      double phi = 0.0;
      for (int c = 0; c < k; ++c) {
        const double amp = fit.theta[4 * c + 0];
        const Point2 mu{fit.theta[4 * c + 1], fit.theta[4 * c + 2]};
        const double sigma = fit.theta[4 * c + 3];
        const double s2 = sigma * sigma;
        const double d2 = squared_distance(q, mu);
        const double e = std::exp(-d2 / (2.0 * s2));
        phi += amp * e;
        jac_row[4 * c + 0] = e;
        jac_row[4 * c + 1] = amp * e * (q.x - mu.x) / s2;
        jac_row[4 * c + 2] = amp * e * (q.y - mu.y) / s2;
        jac_row[4 * c + 3] = amp * e * d2 / (s2 * sigma);
      }
      const double r = phi - meas[m].feature_count;
      for (int a = 0; a < n_params; ++a) {
        jtr[a] += jac_row[a] * r;
        for (int b = a; b < n_params; ++b) jtj[a * n_params + b] += jac_row[a] * jac_row[b];
      }
    }
    for (int a = 0; a < n_params; ++a)
      for (int b = 0; b < a; ++b) jtj[a * n_params + b] = jtj[b * n_params + a];

    bool accepted = false;
    double step_norm = 0.0;
    while (!accepted) {
      std::vector<double> lhs = jtj;
      for (int a = 0; a < n_params; ++a) lhs[a * n_params + a] += damping;
      std::vector<double> rhs(n_params);
      for (int a = 0; a < n_params; ++a) rhs[a] = -jtr[a];

      std::vector<double> delta;
      try {
        delta = solve_dense(std::move(lhs), std::move(rhs), n_params);
      } catch (const std::runtime_error&) {
        delta.clear();
      }

      std::vector<double> trial = fit.theta;
      if (!delta.empty())
        for (int a = 0; a < n_params; ++a) trial[a] += delta[a];

      const bool ok = !delta.empty() && params_valid(trial, k);
      const double trial_residual = ok ? residual_of(trial) : std::numeric_limits<double>::infinity();
      if (ok && trial_residual <= fit.residual) {
        step_norm = 0.0;
        for (double d : delta) step_norm += d * d;
        step_norm = std::sqrt(step_norm);
        fit.theta = std::move(trial);
        fit.residual = trial_residual;
        fit.history.push_back(fit.residual);
        fit.iterations = iter + 1;
        damping = std::max(damping / 10.0, 1e-12);
        accepted = true;
      } else {
        damping *= 10.0;
        if (damping > 1e12) return fit;  // stuck; keep the best point found
      }
    }
    if (step_norm < kStepStop) break;
  }
  return fit;
}

}  // namespace

FitResult fit_mixture_detailed(const std::vector<FeatureMeasurement>& measurements, int k,
                               std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("mixture size must be >= 1");
  if (static_cast<int>(measurements.size()) < 4 * k)
    throw std::invalid_argument("underdetermined fit");
  double lo_count = measurements.front().feature_count;
  double hi_count = lo_count;
  Point2 lo{measurements.front().location}, hi{lo};
  for (const auto& m : measurements) {
    if (!std::isfinite(m.feature_count) || m.feature_count < 0.0)
      throw std::invalid_argument("invalid measurement");
    lo_count = std::min(lo_count, m.feature_count);
    hi_count = std::max(hi_count, m.feature_count);
    lo.x = std::min(lo.x, m.location.x);
    lo.y = std::min(lo.y, m.location.y);
    hi.x = std::max(hi.x, m.location.x);
    hi.y = std::max(hi.y, m.location.y);
  }
  if (hi_count - lo_count <= 0.0) throw std::invalid_argument("degenerate measurements");
  const double diag = std::max(distance(lo, hi), 1e-6);

  // Start 0: peaks at the k largest counts, kept apart so one cluster does
  // not absorb every seed.
  std::vector<int> order(measurements.size());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = static_cast<int>(m);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return measurements[a].feature_count > measurements[b].feature_count;
  });
  std::vector<Point2> seeds;
  double separation = diag / (2.0 * k);
  while (static_cast<int>(seeds.size()) < k) {
    for (int idx : order) {
      if (static_cast<int>(seeds.size()) == k) break;
      const Point2 c = measurements[idx].location;
      bool far = true;
      for (const auto& s : seeds)
        if (distance(s, c) < separation) far = false;
      if (far) seeds.push_back(c);
    }
    separation *= 0.5;
    if (separation < 1e-12) break;
  }
  while (static_cast<int>(seeds.size()) < k) seeds.push_back(measurements[order[0]].location);

  std::vector<std::vector<double>> starts;
  {
    std::vector<double> theta(4 * k);
    for (int c = 0; c < k; ++c) {
      theta[4 * c + 0] = std::max(hi_count - lo_count, 1e-6);
      theta[4 * c + 1] = seeds[c].x;
      theta[4 * c + 2] = seeds[c].y;
      theta[4 * c + 3] = 0.25 * diag / std::sqrt(static_cast<double>(k));
    }
    starts.push_back(std::move(theta));
  }
  constexpr int kRandomRestarts = 4;
  for (int r = 0; r < kRandomRestarts; ++r) {
    Rng rng(Rng::substream(seed, static_cast<std::uint64_t>(r)));
    std::vector<double> theta(4 * k);
    for (int c = 0; c < k; ++c) {
      theta[4 * c + 0] = std::max((hi_count - lo_count) * rng.uniform(0.3, 1.2), 1e-6);
      theta[4 * c + 1] = rng.uniform(lo.x, hi.x);
      theta[4 * c + 2] = rng.uniform(lo.y, hi.y);
      theta[4 * c + 3] = diag * rng.uniform(0.05, 0.4);
    }
    starts.push_back(std::move(theta));
  }

  FitResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.initial_residual = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    best.initial_residual =
        std::min(best.initial_residual, mixture_residual(unpack(start, k), measurements));
    LocalFit local = gauss_newton(measurements, start, k);
    if (local.residual < best.residual) {
      best.residual = local.residual;
      best.density = unpack(local.theta, k);
      best.iterations = local.iterations;
      best.residual_history = std::move(local.history);
    }
  }
  return best;
}

GaussianMixtureDensity fit_mixture(const std::vector<FeatureMeasurement>& measurements, int k,
                                   std::uint64_t seed) {
  return fit_mixture_detailed(measurements, k, seed).density;
}

namespace {

double parse_double(std::string_view field, const char* what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{}) throw std::invalid_argument(std::string("invalid number in ") + what);
  (void)ptr;
  return value;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

}  // namespace

std::vector<FeatureMeasurement> read_measurements_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measurements file: " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y,count")
    throw std::invalid_argument("measurements CSV must start with header x,y,count");
  std::vector<FeatureMeasurement> rows;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto c1 = t.find(',');
    const auto c2 = t.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("malformed measurement row: " + t);
    FeatureMeasurement m;
    m.location.x = parse_double(std::string_view(t).substr(0, c1), "measurements CSV");
    m.location.y = parse_double(std::string_view(t).substr(c1 + 1, c2 - c1 - 1), "measurements CSV");
    m.feature_count = parse_double(std::string_view(t).substr(c2 + 1), "measurements CSV");
    rows.push_back(m);
  }
  return rows;
}

void write_measurements_csv(const std::string& path, const std::vector<FeatureMeasurement>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write measurements file: " + path);
  out << "x,y,count\n";
  char buf[128];
  for (const auto& m : rows) {
    auto end = buf;
    end = std::to_chars(end, buf + sizeof buf, m.location.x).ptr;
    *end++ = ',';
    end = std::to_chars(end, buf + sizeof buf, m.location.y).ptr;
    *end++ = ',';
    end = std::to_chars(end, buf + sizeof buf, m.feature_count).ptr;
    *end++ = '\n';
    out.write(buf, end - buf);
  }
}

std::string density_to_json(const GaussianMixtureDensity& density) {
  nlohmann::json j;
  j["components"] = nlohmann::json::array();
  for (const auto& c : density.components) {
    j["components"].push_back({{"amplitude", c.amplitude},
                               {"center", {c.center.x, c.center.y}},
                               {"sigma", c.sigma}});
  }
  j["floor"] = density.floor;
  return j.dump(2) + "\n";
}

GaussianMixtureDensity density_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid density JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("density JSON must be an object");
  GaussianMixtureDensity d;
  for (const auto& [key, value] : j.items()) {
    if (key == "components") {
      if (!value.is_array()) throw std::invalid_argument("density components must be an array");
      for (const auto& cj : value) {
        GaussianComponent c;
        bool has_amp = false, has_center = false, has_sigma = false;
        for (const auto& [ck, cv] : cj.items()) {
          if (ck == "amplitude") {
            c.amplitude = cv.get<double>();
            has_amp = true;
          } else if (ck == "center") {
            if (!cv.is_array() || cv.size() != 2)
              throw std::invalid_argument("component center must be [x,y]");
            c.center = {cv[0].get<double>(), cv[1].get<double>()};
            has_center = true;
          } else if (ck == "sigma") {
            c.sigma = cv.get<double>();
            has_sigma = true;
          } else {
            throw std::invalid_argument("unknown key '" + ck + "' in density component");
          }
        }
        if (!has_amp || !has_center || !has_sigma)
          throw std::invalid_argument("density component requires amplitude, center, sigma");
        if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude))
          throw std::invalid_argument("component amplitude must be > 0");
        if (!(c.sigma > 0.0) || !std::isfinite(c.sigma))
          throw std::invalid_argument("component sigma must be > 0");
        d.components.push_back(c);
      }
    } else if (key == "floor") {
      d.floor = value.get<double>();
      if (!(d.floor >= 0.0) || !std::isfinite(d.floor))
        throw std::invalid_argument("density floor must be >= 0");
    } else {
      throw std::invalid_argument("unknown key '" + key + "' in density");
    }
  }
  if (d.components.empty() && d.floor <= 0.0)
    throw std::invalid_argument("density must have components or a positive floor");
  return d;
}

GaussianMixtureDensity read_density_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open density file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return density_from_json(ss.str());
}

void write_density_json(const std::string& path, const GaussianMixtureDensity& density) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write density file: " + path);
  out << density_to_json(density);
}

}  // namespace photocov
