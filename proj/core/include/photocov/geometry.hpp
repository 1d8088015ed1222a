#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <vector>

#include "photocov/vec2.hpp"

namespace photocov {

/// Convex region as a counterclockwise vertex list. An empty vertex list is
/// the empty region. Vertices closer than kVertexMergeTol are considered
/// duplicates.
struct ConvexPolygon {
  std::vector<Point2> vertices;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
};

inline constexpr double kVertexMergeTol = 1e-12;

/// Half-plane {q : normal . q <= offset}.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;

  double signed_distance(Point2 q) const { return normal.dot(q) - offset; }
};

/// Ordered agent index pair, i < j.
struct PairKey {
  int i = 0;
  int j = 0;

  auto operator<=>(const PairKey&) const = default;
};

/// Partition of a convex region into cells indexed by agent pairs: cell
/// (i, j) holds the points whose two nearest agents are i and j.
struct OrderTwoPartition {
  std::map<PairKey, ConvexPolygon> cells;
  ConvexPolygon region;
};

double polygon_area(const ConvexPolygon& poly);

/// Maximum pairwise vertex distance. Throws std::invalid_argument("empty
/// region") for the empty polygon.
double polygon_diameter(const ConvexPolygon& poly);

/// Area centroid of a non-degenerate polygon (vertex mean when the area
/// vanishes).
Point2 polygon_centroid(const ConvexPolygon& poly);

/// Axis-aligned bounding box as (min, max) corners.
std::pair<Point2, Point2> bounding_box(const ConvexPolygon& poly);

/// Counterclockwise rectangle from two opposite corners.
ConvexPolygon make_rectangle(Point2 corner_a, Point2 corner_b);

/// True when the polygon has 4 vertices and orthogonal sides (any
/// orientation), within tol.
bool is_rectangle(const ConvexPolygon& poly, double tol = 1e-9);

/// True when all cross products of consecutive edges are >= -tol (convex,
/// counterclockwise).
bool is_convex_ccw(const ConvexPolygon& poly, double tol = 1e-9);

/// Point membership with a distance-based boundary tolerance.
bool contains(const ConvexPolygon& poly, Point2 q, double tol = 1e-9);

/// q itself when inside, otherwise the nearest point on the boundary.
Point2 closest_point_in_polygon(const ConvexPolygon& poly, Point2 q);

/// Half-plane of points at least as close to a as to b. Throws
/// std::invalid_argument("degenerate bisector") when |a-b| <= 1e-9.
HalfPlane bisector_halfplane(Point2 a, Point2 b);

/// Intersection of a convex polygon with a half-plane; preserves convexity
/// and counterclockwise order, merges vertices within kVertexMergeTol.
ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp);

struct AgentConfiguration {
  std::vector<Point2> positions;

  int count() const { return static_cast<int>(positions.size()); }
};

inline constexpr double kAgentDegeneracyFloor = 1e-9;

/// Throws std::invalid_argument on agents outside the region or pairwise
/// closer than kAgentDegeneracyFloor.
void validate_configuration(const AgentConfiguration& agents, const ConvexPolygon& region);

/// Second-order Voronoi partition: cell (i, j) is the region clipped by the
/// bisectors of i and j against every other agent. Cells may be empty; the
/// non-empty cells cover the region.
OrderTwoPartition order_two_voronoi(const AgentConfiguration& agents, const ConvexPolygon& region);

/// Linear index of pair (i, j) in lexicographic order over n agents.
int pair_index(PairKey key, int n);
/// Inverse of pair_index.
PairKey pair_from_index(int index, int n);
/// Number of unordered pairs for n agents.
int pair_count(int n);

/// Indices of the two nearest agents to q, ties broken by lowest index.
PairKey nearest_two_agents(const AgentConfiguration& agents, Point2 q);

}  // namespace photocov
