#include "photocov/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace photocov {

namespace {

struct RulePoint {
  double l0, l1, l2;  // barycentric coordinates
  double weight;      // weights sum to 1 over the rule
};

// Symmetric triangle rules (Dunavant); weights normalized to unit total.
constexpr std::array<RulePoint, 3> kRuleDegree2{{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
}};

constexpr double kD4a1 = 0.108103018168070, kD4b1 = 0.445948490915965, kD4w1 = 0.223381589678011;
constexpr double kD4a2 = 0.816847572980459, kD4b2 = 0.091576213509771, kD4w2 = 0.109951743655322;
constexpr std::array<RulePoint, 6> kRuleDegree4{{
    {kD4a1, kD4b1, kD4b1, kD4w1},
    {kD4b1, kD4a1, kD4b1, kD4w1},
    {kD4b1, kD4b1, kD4a1, kD4w1},
    {kD4a2, kD4b2, kD4b2, kD4w2},
    {kD4b2, kD4a2, kD4b2, kD4w2},
    {kD4b2, kD4b2, kD4a2, kD4w2},
}};

constexpr double kD5a1 = 0.059715871789770, kD5b1 = 0.470142064105115, kD5w1 = 0.132394152788506;
constexpr double kD5a2 = 0.797426985353087, kD5b2 = 0.101286507323456, kD5w2 = 0.125939180544827;
constexpr std::array<RulePoint, 7> kRuleDegree5{{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kD5a1, kD5b1, kD5b1, kD5w1},
    {kD5b1, kD5a1, kD5b1, kD5w1},
    {kD5b1, kD5b1, kD5a1, kD5w1},
    {kD5a2, kD5b2, kD5b2, kD5w2},
    {kD5b2, kD5a2, kD5b2, kD5w2},
    {kD5b2, kD5b2, kD5a2, kD5w2},
}};

constexpr double kD7a1 = 0.479308067841923, kD7b1 = 0.260345966079038, kD7w1 = 0.175615257433204;
constexpr double kD7a2 = 0.869739794195568, kD7b2 = 0.065130102902216, kD7w2 = 0.053347235608839;
constexpr double kD7a3 = 0.638444188569809, kD7b3 = 0.312865496004875, kD7c3 = 0.048690315425316;
constexpr double kD7w3 = 0.077113760890257;
constexpr std::array<RulePoint, 13> kRuleDegree7{{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -0.149570044467670},
    {kD7a1, kD7b1, kD7b1, kD7w1},
    {kD7b1, kD7a1, kD7b1, kD7w1},
    {kD7b1, kD7b1, kD7a1, kD7w1},
    {kD7a2, kD7b2, kD7b2, kD7w2},
    {kD7b2, kD7a2, kD7b2, kD7w2},
    {kD7b2, kD7b2, kD7a2, kD7w2},
    {kD7a3, kD7b3, kD7c3, kD7w3},
    {kD7a3, kD7c3, kD7b3, kD7w3},
    {kD7b3, kD7a3, kD7c3, kD7w3},
    {kD7b3, kD7c3, kD7a3, kD7w3},
    {kD7c3, kD7a3, kD7b3, kD7w3},
    {kD7c3, kD7b3, kD7a3, kD7w3},
}};

std::span<const RulePoint> rule_for_degree(int degree) {
  if (degree < 2) throw std::invalid_argument("quadrature degree must be >= 2");
  if (degree <= 2) return kRuleDegree2;
  if (degree <= 4) return kRuleDegree4;
  if (degree <= 5) return kRuleDegree5;
  return kRuleDegree7;
}

struct Moments3 {
  double m = 0.0, mx = 0.0, my = 0.0;

  Moments3 operator+(const Moments3& o) const { return {m + o.m, mx + o.mx, my + o.my}; }
  Moments3 operator-(const Moments3& o) const { return {m - o.m, mx - o.mx, my - o.my}; }
  Moments3 operator*(double s) const { return {m * s, mx * s, my * s}; }
  Moments3& operator+=(const Moments3& o) {
    m += o.m;
    mx += o.mx;
    my += o.my;
    return *this;
  }
};

double value_norm(double v) { return std::abs(v); }
double value_norm(const Moments3& v) { return std::abs(v.m) + std::abs(v.mx) + std::abs(v.my); }

struct Triangle {
  Point2 a, b, c;

  double area() const { return 0.5 * (b - a).cross(c - a); }
};

template <typename V, typename F>
V rule_estimate(const Triangle& t, const F& f, std::span<const RulePoint> rule) {
  const double area = t.area();
  V acc{};
  for (const RulePoint& p : rule) {
    const Point2 q{t.a.x * p.l0 + t.b.x * p.l1 + t.c.x * p.l2,
                   t.a.y * p.l0 + t.b.y * p.l1 + t.c.y * p.l2};
    acc += f(q) * p.weight;
  }
  return acc * area;
}

template <typename B>
bool corners_disagree(const Triangle& t, const B& branch) {
  const int ba = branch(t.a);
  return branch(t.b) != ba || branch(t.c) != ba;
}

template <typename V, typename F, typename B>
V integrate_recursive(const Triangle& t, V coarse, const F& f, const B* branch, int depth,
                      std::span<const RulePoint> rule, const QuadratureSpec& spec) {
  if (depth >= spec.max_subdivisions) return coarse;
  const Point2 ab = (t.a + t.b) * 0.5;
  const Point2 bc = (t.b + t.c) * 0.5;
  const Point2 ca = (t.c + t.a) * 0.5;
  const std::array<Triangle, 4> children{{{t.a, ab, ca}, {ab, t.b, bc}, {ca, bc, t.c}, {ab, bc, ca}}};

  std::array<V, 4> child_vals{};
  V fine{};
  for (int k = 0; k < 4; ++k) {
    child_vals[k] = rule_estimate<V>(children[k], f, rule);
    fine += child_vals[k];
  }
  const bool force = branch != nullptr && corners_disagree(t, *branch);
  if (!force) {
    const double diff = value_norm(fine - coarse);
    const double scale = std::max(value_norm(fine), value_norm(coarse));
    if (diff <= spec.rel_tol * scale) return fine;
  }
  V total{};
  for (int k = 0; k < 4; ++k)
    total += integrate_recursive(children[k], child_vals[k], f, branch, depth + 1, rule, spec);
  return total;
}

template <typename V, typename F, typename B>
V integrate_cell(const ConvexPolygon& cell, const F& f, const B* branch,
                 const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0)) throw std::invalid_argument("quadrature rel_tol must be > 0");
  const auto rule = rule_for_degree(spec.base_rule_degree);
  const auto& v = cell.vertices;
  V total{};
  if (v.size() < 3) return total;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const Triangle t{v[0], v[k], v[k + 1]};
    const V coarse = rule_estimate<V>(t, f, rule);
    total += integrate_recursive(t, coarse, f, branch, 0, rule, spec);
  }
  return total;
}

}  // namespace

double integrate(const ConvexPolygon& cell, const std::function<double(Point2)>& f,
                 const QuadratureSpec& spec) {
  return integrate_cell<double>(cell, f, static_cast<const std::function<int(Point2)>*>(nullptr),
                                spec);
}

double integrate(const ConvexPolygon& cell, const std::function<double(Point2)>& f,
                 const std::function<int(Point2)>& branch, const QuadratureSpec& spec) {
  return integrate_cell<double>(cell, f, &branch, spec);
}

CellMoments cell_moments(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                         const QuadratureSpec& spec) {
  auto f = [&density](Point2 q) {
    const double phi = density.eval(q);
    return Moments3{phi, q.x * phi, q.y * phi};
  };
  const Moments3 m =
      integrate_cell<Moments3>(cell, f, static_cast<const std::function<int(Point2)>*>(nullptr),
                               spec);
  return CellMoments{m.m, {m.mx, m.my}};
}

double cell_mass(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                 const QuadratureSpec& spec) {
  auto f = [&density](Point2 q) { return density.eval(q); };
  return integrate_cell<double>(cell, f, static_cast<const std::function<int(Point2)>*>(nullptr),
                                spec);
}

Point2 cell_centroid(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                     const QuadratureSpec& spec, double mass_floor) {
  const CellMoments m = cell_moments(cell, density, spec);
  if (!(m.mass > mass_floor)) throw std::runtime_error("massless cell");
  return m.centroid();
}

double cell_cost_integral(const ConvexPolygon& cell, const GaussianMixtureDensity& density,
                          const SensorModel& sensor, Point2 p_i, Point2 p_j,
                          const QuadratureSpec& spec) {
  auto f = [&](Point2 q) {
    return sensor(distance(q, p_i), distance(q, p_j)) * density.eval(q);
  };
  if (!sensor.discontinuous()) {
    return integrate_cell<double>(cell, f, static_cast<const std::function<int(Point2)>*>(nullptr),
                                  spec);
  }
  auto branch = [&](Point2 q) {
    return *sensor.branch(distance(q, p_i), distance(q, p_j));
  };
  return integrate_cell<double>(cell, f, &branch, spec);
}

}  // namespace photocov
