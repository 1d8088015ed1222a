#include "photocov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace photocov {

double polygon_area(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t k = 0, m = v.size(); k < m; ++k) {
    const Point2& a = v[k];
    const Point2& b = v[(k + 1) % m];
    twice += a.cross(b);
  }
  return 0.5 * twice;
}

double polygon_diameter(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.empty()) throw std::invalid_argument("empty region");
  double best = 0.0;
  for (std::size_t a = 0; a + 1 < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      best = std::max(best, squared_distance(v[a], v[b]));
  return std::sqrt(best);
}

Point2 polygon_centroid(const ConvexPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.empty()) throw std::invalid_argument("empty region");
  const double area = polygon_area(poly);
  if (area <= kVertexMergeTol) {
    Vec2 sum{0.0, 0.0};
    for (const auto& p : v) sum += p;
    return sum / static_cast<double>(v.size());
  }
  Vec2 acc{0.0, 0.0};
  for (std::size_t k = 0, m = v.size(); k < m; ++k) {
    const Point2& a = v[k];
    const Point2& b = v[(k + 1) % m];
    const double w = a.cross(b);
    acc += (a + b) * w;
  }
  return acc / (6.0 * area);
}

std::pair<Point2, Point2> bounding_box(const ConvexPolygon& poly) {
  if (poly.empty()) throw std::invalid_argument("empty region");
  Point2 lo = poly.vertices.front();
  Point2 hi = lo;
  for (const auto& p : poly.vertices) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return {lo, hi};
}

ConvexPolygon make_rectangle(Point2 a, Point2 b) {
  const double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
  const double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
  return ConvexPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

bool is_rectangle(const ConvexPolygon& poly, double tol) {
  const auto& v = poly.vertices;
  if (v.size() != 4) return false;
  for (int k = 0; k < 4; ++k) {
    const Vec2 e0 = v[(k + 1) % 4] - v[k];
    const Vec2 e1 = v[(k + 2) % 4] - v[(k + 1) % 4];
    if (std::abs(e0.dot(e1)) > tol * std::max(1.0, e0.norm() * e1.norm())) return false;
  }
  return polygon_area(poly) > tol;
}

bool is_convex_ccw(const ConvexPolygon& poly, double tol) {
  const auto& v = poly.vertices;
  if (v.size() < 3) return true;
  for (std::size_t k = 0, m = v.size(); k < m; ++k) {
    const Vec2 e0 = v[(k + 1) % m] - v[k];
    const Vec2 e1 = v[(k + 2) % m] - v[(k + 1) % m];
    if (e0.cross(e1) < -tol) return false;
  }
  return true;
}

bool contains(const ConvexPolygon& poly, Point2 q, double tol) {
  const auto& v = poly.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return distance(v[0], q) <= tol;
  if (v.size() == 2) {
    return distance(closest_point_in_polygon(poly, q), q) <= tol;
  }
  for (std::size_t k = 0, m = v.size(); k < m; ++k) {
    const Vec2 edge = v[(k + 1) % m] - v[k];
    const double len = edge.norm();
    if (len <= kVertexMergeTol) continue;
    // Signed distance of q to the edge line, positive on the interior side.
    const double d = edge.cross(q - v[k]) / len;
    if (d < -tol) return false;
  }
  return true;
}

namespace {

Point2 closest_point_on_segment(Point2 a, Point2 b, Point2 q) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 <= kVertexMergeTol * kVertexMergeTol) return a;
  const double t = std::clamp((q - a).dot(ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

}  // namespace

Point2 closest_point_in_polygon(const ConvexPolygon& poly, Point2 q) {
  const auto& v = poly.vertices;
  if (v.empty()) throw std::invalid_argument("empty region");
  if (v.size() >= 3 && contains(poly, q, 0.0)) return q;
  Point2 best = v.front();
  double best_d = squared_distance(best, q);
  for (std::size_t k = 0, m = v.size(); k < m; ++k) {
    const Point2 c = closest_point_on_segment(v[k], v[(k + 1) % m], q);
    const double d = squared_distance(c, q);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

HalfPlane bisector_halfplane(Point2 a, Point2 b) {
  const Vec2 dir = b - a;
  const double len = dir.norm();
  if (len <= 1e-9) throw std::invalid_argument("degenerate bisector");
  // ||q-a|| <= ||q-b||  <=>  2(b-a).q <= |b|^2 - |a|^2, normalized.
  const Vec2 n = dir / len;
  const Point2 mid = (a + b) * 0.5;
  return HalfPlane{n, n.dot(mid)};
}

ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp) {
  const auto& in = poly.vertices;
  if (in.empty()) return {};

  std::vector<Point2> out;
  out.reserve(in.size() + 1);
  bool all_inside = true;
  for (std::size_t k = 0, m = in.size(); k < m; ++k) {
    const Point2& cur = in[k];
    const Point2& nxt = in[(k + 1) % m];
    const double dc = hp.signed_distance(cur);
    const double dn = hp.signed_distance(nxt);
    const bool cur_in = dc <= 0.0;
    const bool nxt_in = dn <= 0.0;
    if (cur_in) out.push_back(cur);
    if (cur_in != nxt_in) {
      all_inside = false;
      const double t = dc / (dc - dn);
      out.push_back(cur + (nxt - cur) * t);
    } else if (!cur_in) {
      all_inside = false;
    }
  }
  if (all_inside) return poly;

  // Merge near-duplicate consecutive vertices produced by clipping.
  std::vector<Point2> merged;
  merged.reserve(out.size());
  for (const auto& p : out) {
    if (merged.empty() || distance(merged.back(), p) > kVertexMergeTol) merged.push_back(p);
  }
  while (merged.size() > 1 && distance(merged.front(), merged.back()) <= kVertexMergeTol)
    merged.pop_back();
  if (merged.size() < 3) return {};
  return ConvexPolygon{std::move(merged)};
}

void validate_configuration(const AgentConfiguration& agents, const ConvexPolygon& region) {
  const auto& p = agents.positions;
  for (const auto& pos : p) {
    if (!contains(region, pos, 1e-9)) throw std::invalid_argument("agent outside region");
  }
  for (std::size_t a = 0; a + 1 < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (distance(p[a], p[b]) <= kAgentDegeneracyFloor)
        throw std::invalid_argument("degenerate configuration");
}

OrderTwoPartition order_two_voronoi(const AgentConfiguration& agents, const ConvexPolygon& region) {
  const int n = agents.count();
  if (n < 2) throw std::invalid_argument("second-order coverage requires n >= 2");
  if (region.size() < 3) throw std::invalid_argument("empty region");
  validate_configuration(agents, region);

  OrderTwoPartition partition;
  partition.region = region;
  const auto& p = agents.positions;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ConvexPolygon cell = region;
      for (int w = 0; w < n && !cell.empty(); ++w) {
        if (w == i || w == j) continue;
        cell = clip(cell, bisector_halfplane(p[i], p[w]));
        if (cell.empty()) break;
        cell = clip(cell, bisector_halfplane(p[j], p[w]));
      }
      partition.cells.emplace(PairKey{i, j}, std::move(cell));
    }
  }
  return partition;
}

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_index(PairKey key, int n) {
  return key.i * n - key.i * (key.i + 1) / 2 + (key.j - key.i - 1);
}

PairKey pair_from_index(int index, int n) {
  for (int i = 0; i < n - 1; ++i) {
    const int row = n - 1 - i;
    if (index < row) return PairKey{i, i + 1 + index};
    index -= row;
  }
  throw std::invalid_argument("pair index out of range");
}

PairKey nearest_two_agents(const AgentConfiguration& agents, Point2 q) {
  const auto& p = agents.positions;
  if (p.size() < 2) throw std::invalid_argument("second-order coverage requires n >= 2");
  int first = -1, second = -1;
  double d_first = std::numeric_limits<double>::infinity();
  double d_second = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(p.size()); ++k) {
    const double d = squared_distance(p[k], q);
    if (d < d_first) {
      second = first;
      d_second = d_first;
      first = k;
      d_first = d;
    } else if (d < d_second) {
      second = k;
      d_second = d;
    }
  }
  return first < second ? PairKey{first, second} : PairKey{second, first};
}

}  // namespace photocov
