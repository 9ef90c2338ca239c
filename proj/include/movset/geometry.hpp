#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "movset/errors.hpp"
#include "movset/numerics.hpp"

namespace movset::geom {

using Vec2 = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Domains.  Every variant describes a compact convex region V of finite area.
// ---------------------------------------------------------------------------

struct Disc {
  double radius = 1.0;  // centered at the origin
};

// V = { (x,y) : |y| <= x tan(alpha), |p| <= reach }.  The circular lid keeps
// the area finite; alpha in (0, pi/2).
struct Wedge {
  double alpha = num::kPi / 4;
  double reach = 1.0;
};

// Counterclockwise vertex list, convex.
struct ConvexPolygon {
  std::vector<Vec2> verts;
};

// V = { (x,y) : |x| <= half_width, 0 < y < g(x) } for an even, concave g with
// a strict curvature maximum at x = 0.  Derivatives are supplied by the
// caller; d3/d4 may be empty, in which case finite differences are used.
struct SymmetricCap {
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> ddg;
  double half_width = 1.0;
};

using Domain = std::variant<Disc, Wedge, ConvexPolygon, SymmetricCap>;

double domain_area(const Domain& V);
double domain_diameter(const Domain& V);
// Signed distance is negative inside V (exact for disc/wedge/polygon,
// graph-based for caps).
double signed_distance(const Domain& V, const Vec2& p);
inline bool domain_contains(const Domain& V, const Vec2& p, double tol = 1e-9) {
  return signed_distance(V, p) <= tol;
}

ConvexPolygon unit_triangle();  // vertices (0,0), (1,0), (1/2, sqrt(3)/2)

// ---------------------------------------------------------------------------
// Boundary pieces.  A CircArc is either a circular arc (finite radius, angles
// a0 -> a1 in traversal order, increasing = counterclockwise) or a straight
// segment (radius = +inf, endpoints p0 -> p1).  Traversal keeps the occupied
// region Omega on the LEFT.  Consequently the signed curvature (positive when
// the boundary bends toward Omega) is +1/r for ccw arcs, -1/r for cw arcs,
// and 0 for segments.
// ---------------------------------------------------------------------------

enum class ArcKind { free_arc, controlled };

struct CircArc {
  Vec2 center{0, 0};
  double radius = std::numeric_limits<double>::infinity();
  double a0 = 0, a1 = 0;  // used when radius is finite
  Vec2 p0{0, 0}, p1{0, 0};  // used when radius is infinite
  ArcKind kind = ArcKind::controlled;
  double beta = 0;   // representative inward normal speed; -1 on free arcs
  double beta0 = 0;  // endpoint values (== beta when speed is uniform)
  double beta1 = 0;

  bool is_segment() const { return std::isinf(radius); }
  double length() const;
  Vec2 point_at(double s) const;    // s in [0,1] along traversal
  Vec2 tangent_at(double s) const;  // unit, in traversal direction
  Vec2 start() const { return point_at(0); }
  Vec2 end() const { return point_at(1); }
  double signed_curvature() const;
  // Circulation of x dy - y dx along the piece (for Green's-theorem areas).
  double circulation() const;
};

CircArc make_segment(const Vec2& p0, const Vec2& p1, ArcKind kind, double beta);
CircArc make_arc(const Vec2& center, double r, double a0, double a1, ArcKind kind,
                 double beta);

// Relative boundary of Omega inside V: one or more disjoint open chains whose
// endpoints lie on the rim of V, listed in the order they are met when
// walking the full boundary of Omega counterclockwise.
struct Boundary {
  std::vector<std::vector<CircArc>> chains;
};

inline Boundary single_chain(std::vector<CircArc> arcs) {
  Boundary b;
  b.chains.push_back(std::move(arcs));
  return b;
}

double relative_perimeter(const Boundary& b);

// Traversal reversal; swaps which side of the chains the region lies on.
CircArc reversed(const CircArc& a);
Boundary reversed(const Boundary& b);

// Throws InvalidBoundary unless consecutive pieces chain head-to-tail, chain
// endpoints lie on the rim of V, and all pieces stay inside V (tol_geo
// relative to diam(V)).
void validate_boundary(const Domain& V, const Boundary& b, double tol_geo = 1e-7);

// Area of the region enclosed by the chains together with the ccw rim walks
// that connect consecutive chain endpoints.  Exact for disc/wedge/polygon
// rims; the cap graph uses a dense polyline.
double region_area(const Domain& V, const Boundary& b);

// Membership test for the region described by (V, b).
bool point_in_region(const Domain& V, const Boundary& b, const Vec2& p);

// Distance from p to the full boundary of the region (chains + rim portions).
double distance_to_region_boundary(const Domain& V, const Boundary& b, const Vec2& p);

// Unit tangent of the rim of V at a rim point, ccw direction.
Vec2 rim_tangent(const Domain& V, const Vec2& p);
// Distance from p to the rim of V.
double rim_distance(const Domain& V, const Vec2& p);

// ---------------------------------------------------------------------------
// Perpendicular crossing arcs.  An arc crosses a curve perpendicularly when
// the arc's radius at the crossing point is parallel to the curve's tangent
// there.  The two-graph solver finds, for a point (x, f1(x)) on the first
// graph, the abscissa sigma < 0 on the second graph such that one circle
// crosses both graphs perpendicularly; the smooth variant uses a single
// graph near a curvature maximum at x = 0.
// ---------------------------------------------------------------------------

struct Graph {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

struct PerpArc {
  CircArc arc;       // the perpendicular arc, traversed from (sigma, f2) to (x, f1)
  double sigma;      // matched abscissa on the second graph
  double radius;     // arc radius after recentering
  Vec2 touch1;       // crossing point on graph 1 (at x)
  Vec2 touch2;       // crossing point on graph 2 (at sigma)
};

PerpArc perp_arc_corner(const Graph& f1, const Graph& f2, double x);

struct SmoothGraph {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
};

// Requires a strict curvature maximum at 0: f'(0)=0, f''(0)>0 convention with
// curvature w(x) = f''/(1+f'^2)^{3/2} and w''(0) < 0, else NotAMaximum.
PerpArc perp_arc_smooth(const SmoothGraph& f, double x);

// ---------------------------------------------------------------------------
// Rim access (shared with validation & admissibility sampling).
// ---------------------------------------------------------------------------

// The rim as a closed ccw loop of pieces (finite polyline for the cap graph).
std::vector<CircArc> rim_pieces(const Domain& V);

struct RimPoint {
  std::size_t piece;
  double s;  // parameter in [0,1] on that piece
};

// Nearest rim location; dist receives the distance.
RimPoint rim_locate(const Domain& V, const Vec2& p, double* dist = nullptr);

// Circulation of x dy - y dx walking the rim ccw from `from` to `to`.
double rim_walk_circulation(const Domain& V, const RimPoint& from, const RimPoint& to);

// Sample points on the ccw rim walk from `from` to `to` (used for distance
// estimates to the part of the region boundary that lies on the rim).
std::vector<Vec2> rim_walk_samples(const Domain& V, const RimPoint& from,
                                   const RimPoint& to, int per_piece = 64);

}  // namespace movset::geom
