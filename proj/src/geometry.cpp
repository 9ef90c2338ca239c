#include "movset/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace movset::geom {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Circulation of x dy - y dx along a straight segment a -> b.
double segment_circulation(const Vec2& a, const Vec2& b) { return cross(a, b); }

// Circulation along a circular arc, center c radius r, angle a0 -> a1.
double arc_circulation(const Vec2& c, double r, double a0, double a1) {
  return r * r * (a1 - a0) + c.x() * r * (std::sin(a1) - std::sin(a0)) +
         c.y() * r * (std::cos(a0) - std::cos(a1));
}

}  // namespace

// --------------------------------------------------------------------------
// CircArc
// --------------------------------------------------------------------------

double CircArc::length() const {
  if (is_segment()) return (p1 - p0).norm();
  return radius * std::abs(a1 - a0);
}

Vec2 CircArc::point_at(double s) const {
  if (is_segment()) return p0 + s * (p1 - p0);
  double a = a0 + s * (a1 - a0);
  return center + radius * Vec2(std::cos(a), std::sin(a));
}

Vec2 CircArc::tangent_at(double s) const {
  if (is_segment()) {
    Vec2 d = p1 - p0;
    double n = d.norm();
    return n > 0 ? Vec2(d / n) : Vec2(1, 0);
  }
  double a = a0 + s * (a1 - a0);
  Vec2 t(-std::sin(a), std::cos(a));
  return a1 >= a0 ? t : Vec2(-t);
}

double CircArc::signed_curvature() const {
  if (is_segment()) return 0.0;
  return (a1 >= a0 ? 1.0 : -1.0) / radius;
}

double CircArc::circulation() const {
  if (is_segment()) return segment_circulation(p0, p1);
  return arc_circulation(center, radius, a0, a1);
}

CircArc make_segment(const Vec2& p0, const Vec2& p1, ArcKind kind, double beta) {
  CircArc a;
  a.p0 = p0;
  a.p1 = p1;
  a.kind = kind;
  a.beta = a.beta0 = a.beta1 = beta;
  return a;
}

CircArc make_arc(const Vec2& center, double r, double a0, double a1, ArcKind kind,
                 double beta) {
  if (!(r > 0) || !std::isfinite(r)) fail(Err::OutOfRange, "make_arc: radius must be positive");
  if (std::abs(a1 - a0) > 2 * num::kPi + 1e-9)
    fail(Err::OutOfRange, "make_arc: angular span exceeds a full turn");
  CircArc a;
  a.center = center;
  a.radius = r;
  a.a0 = a0;
  a.a1 = a1;
  a.kind = kind;
  a.beta = a.beta0 = a.beta1 = beta;
  return a;
}

// --------------------------------------------------------------------------
// Domain measures
// --------------------------------------------------------------------------

double domain_area(const Domain& V) {
  struct {
    double operator()(const Disc& d) const { return num::kPi * d.radius * d.radius; }
    double operator()(const Wedge& w) const { return w.alpha * w.reach * w.reach; }
    double operator()(const ConvexPolygon& p) const {
      double s = 0;
      for (std::size_t i = 0; i < p.verts.size(); ++i)
        s += cross(p.verts[i], p.verts[(i + 1) % p.verts.size()]);
      return 0.5 * s;
    }
    double operator()(const SymmetricCap& c) const {
      return num::integrate([&](double x) { return std::max(0.0, c.g(x)); }, -c.half_width,
                            c.half_width, 1e-12);
    }
  } v;
  return std::visit(v, V);
}

double domain_diameter(const Domain& V) {
  if (const auto* d = std::get_if<Disc>(&V)) return 2 * d->radius;
  if (const auto* w = std::get_if<Wedge>(&V))
    return std::max(w->reach, 2 * w->reach * std::sin(w->alpha));
  if (const auto* p = std::get_if<ConvexPolygon>(&V)) {
    double best = 0;
    for (std::size_t i = 0; i < p->verts.size(); ++i)
      for (std::size_t j = i + 1; j < p->verts.size(); ++j)
        best = std::max(best, (p->verts[i] - p->verts[j]).norm());
    return best;
  }
  const auto& c = std::get<SymmetricCap>(V);
  std::vector<Vec2> pts;
  for (int i = 0; i <= 256; ++i) {
    double x = -c.half_width + 2 * c.half_width * i / 256.0;
    pts.emplace_back(x, 0.0);
    pts.emplace_back(x, std::max(0.0, c.g(x)));
  }
  double best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

double signed_distance(const Domain& V, const Vec2& p) {
  if (const auto* d = std::get_if<Disc>(&V)) return p.norm() - d->radius;
  if (const auto* w = std::get_if<Wedge>(&V)) {
    double sa = std::sin(w->alpha), ca = std::cos(w->alpha);
    double upper = -sa * p.x() + ca * p.y();
    double lower = -sa * p.x() - ca * p.y();
    double lid = p.norm() - w->reach;
    return std::max({upper, lower, lid});
  }
  if (const auto* poly = std::get_if<ConvexPolygon>(&V)) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly->verts.size(); ++i) {
      const Vec2& a = poly->verts[i];
      const Vec2& b = poly->verts[(i + 1) % poly->verts.size()];
      Vec2 e = b - a;
      Vec2 n(e.y(), -e.x());  // outward for a ccw polygon
      n.normalize();
      best = std::max(best, (p - a).dot(n));
    }
    return best;
  }
  const auto& c = std::get<SymmetricCap>(V);
  double gp = c.g(p.x());
  double slope = c.dg(p.x());
  double top = (p.y() - gp) / std::sqrt(1 + slope * slope);
  return std::max({std::abs(p.x()) - c.half_width, -p.y(), top});
}

ConvexPolygon unit_triangle() {
  ConvexPolygon t;
  t.verts = {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2)};
  return t;
}

// --------------------------------------------------------------------------
// Rim
// --------------------------------------------------------------------------

std::vector<CircArc> rim_pieces(const Domain& V) {
  std::vector<CircArc> out;
  if (const auto* d = std::get_if<Disc>(&V)) {
    out.push_back(make_arc(Vec2(0, 0), d->radius, 0, 2 * num::kPi, ArcKind::controlled, 0));
    return out;
  }
  if (const auto* w = std::get_if<Wedge>(&V)) {
    Vec2 lo(w->reach * std::cos(w->alpha), -w->reach * std::sin(w->alpha));
    Vec2 hi(w->reach * std::cos(w->alpha), w->reach * std::sin(w->alpha));
    out.push_back(make_segment(Vec2(0, 0), lo, ArcKind::controlled, 0));
    out.push_back(make_arc(Vec2(0, 0), w->reach, -w->alpha, w->alpha, ArcKind::controlled, 0));
    out.push_back(make_segment(hi, Vec2(0, 0), ArcKind::controlled, 0));
    return out;
  }
  if (const auto* p = std::get_if<ConvexPolygon>(&V)) {
    for (std::size_t i = 0; i < p->verts.size(); ++i)
      out.push_back(make_segment(p->verts[i], p->verts[(i + 1) % p->verts.size()],
                                 ArcKind::controlled, 0));
    return out;
  }
  const auto& c = std::get<SymmetricCap>(V);
  const int n = 4096;
  double w = c.half_width;
  auto gl = std::max(0.0, c.g(-w)), gr = std::max(0.0, c.g(w));
  out.push_back(make_segment(Vec2(-w, 0), Vec2(w, 0), ArcKind::controlled, 0));
  if (gr > 1e-14)
    out.push_back(make_segment(Vec2(w, 0), Vec2(w, gr), ArcKind::controlled, 0));
  double prev_x = w;
  double prev_y = gr;
  for (int i = 1; i <= n; ++i) {
    double x = w - 2 * w * i / n;
    double y = std::max(0.0, c.g(x));
    out.push_back(make_segment(Vec2(prev_x, prev_y), Vec2(x, y), ArcKind::controlled, 0));
    prev_x = x;
    prev_y = y;
  }
  if (gl > 1e-14)
    out.push_back(make_segment(Vec2(-w, gl), Vec2(-w, 0), ArcKind::controlled, 0));
  return out;
}

RimPoint rim_locate(const Domain& V, const Vec2& p, double* dist) {
  auto pieces = rim_pieces(V);
  RimPoint best{0, 0};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const CircArc& a = pieces[i];
    double d, s;
    if (a.is_segment()) {
      Vec2 e = a.p1 - a.p0;
      double len2 = e.squaredNorm();
      s = len2 > 0 ? num::clamp((p - a.p0).dot(e) / len2, 0.0, 1.0) : 0.0;
      d = (p - (a.p0 + s * e)).norm();
    } else {
      double span = a.a1 - a.a0;  // rim arcs are ccw, span > 0
      double phi = std::atan2(p.y() - a.center.y(), p.x() - a.center.x());
      double rel = num::wrap_2pi(phi - a.a0);
      if (rel <= span) {
        s = rel / span;
        d = std::abs((p - a.center).norm() - a.radius);
      } else {
        double d0 = (p - a.start()).norm();
        double d1 = (p - a.end()).norm();
        s = d0 <= d1 ? 0.0 : 1.0;
        d = std::min(d0, d1);
      }
    }
    if (d < best_d) {
      best_d = d;
      best = RimPoint{i, s};
    }
  }
  if (dist) *dist = best_d;
  return best;
}

double rim_distance(const Domain& V, const Vec2& p) {
  double d;
  rim_locate(V, p, &d);
  return d;
}

Vec2 rim_tangent(const Domain& V, const Vec2& p) {
  auto pieces = rim_pieces(V);
  RimPoint loc = rim_locate(V, p);
  return pieces[loc.piece].tangent_at(loc.s);
}

namespace {

// Circulation of the sub-piece s in [s0, s1] of a rim piece.
double piece_circulation(const CircArc& a, double s0, double s1) {
  if (a.is_segment()) return segment_circulation(a.point_at(s0), a.point_at(s1));
  double b0 = a.a0 + s0 * (a.a1 - a.a0);
  double b1 = a.a0 + s1 * (a.a1 - a.a0);
  return arc_circulation(a.center, a.radius, b0, b1);
}

}  // namespace

double rim_walk_circulation(const Domain& V, const RimPoint& from, const RimPoint& to) {
  auto pieces = rim_pieces(V);
  if (from.piece == to.piece && to.s >= from.s - 1e-12)
    return piece_circulation(pieces[from.piece], from.s, std::max(from.s, to.s));
  double total = piece_circulation(pieces[from.piece], from.s, 1.0);
  std::size_t i = (from.piece + 1) % pieces.size();
  while (i != to.piece) {
    total += pieces[i].circulation();
    i = (i + 1) % pieces.size();
  }
  total += piece_circulation(pieces[to.piece], 0.0, to.s);
  return total;
}

std::vector<Vec2> rim_walk_samples(const Domain& V, const RimPoint& from, const RimPoint& to,
                                   int per_piece) {
  auto pieces = rim_pieces(V);
  std::vector<Vec2> out;
  auto emit = [&](std::size_t pi, double s0, double s1) {
    for (int k = 0; k <= per_piece; ++k)
      out.push_back(pieces[pi].point_at(s0 + (s1 - s0) * k / per_piece));
  };
  if (from.piece == to.piece && to.s >= from.s - 1e-12) {
    emit(from.piece, from.s, std::max(from.s, to.s));
    return out;
  }
  emit(from.piece, from.s, 1.0);
  std::size_t i = (from.piece + 1) % pieces.size();
  while (i != to.piece) {
    emit(i, 0.0, 1.0);
    i = (i + 1) % pieces.size();
  }
  emit(to.piece, 0.0, to.s);
  return out;
}

// --------------------------------------------------------------------------
// Boundary validation and measures
// --------------------------------------------------------------------------

CircArc reversed(const CircArc& a) {
  CircArc r = a;
  if (a.is_segment()) {
    r.p0 = a.p1;
    r.p1 = a.p0;
  } else {
    r.a0 = a.a1;
    r.a1 = a.a0;
  }
  r.beta0 = a.beta1;
  r.beta1 = a.beta0;
  return r;
}

Boundary reversed(const Boundary& b) {
  Boundary out;
  for (auto it = b.chains.rbegin(); it != b.chains.rend(); ++it) {
    std::vector<CircArc> chain;
    for (auto a = it->rbegin(); a != it->rend(); ++a) chain.push_back(reversed(*a));
    out.chains.push_back(std::move(chain));
  }
  return out;
}

double relative_perimeter(const Boundary& b) {
  double s = 0;
  for (const auto& chain : b.chains)
    for (const auto& a : chain) s += a.length();
  return s;
}

void validate_boundary(const Domain& V, const Boundary& b, double tol_geo) {
  double diam = domain_diameter(V);
  double tol = tol_geo * diam;
  for (const auto& chain : b.chains) {
    if (chain.empty()) fail(Err::InvalidBoundary, "empty chain");
    for (const auto& a : chain) {
      if (a.kind == ArcKind::free_arc && std::abs(a.beta + 1.0) > 1e-9)
        fail(Err::InvalidBoundary, "free arc must have beta = -1");
      for (int k = 0; k <= 8; ++k) {
        Vec2 p = a.point_at(k / 8.0);
        if (signed_distance(V, p) > tol)
          fail(Err::InvalidBoundary, "piece leaves the domain");
      }
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if ((chain[i].end() - chain[i + 1].start()).norm() > tol)
        fail(Err::InvalidBoundary, "consecutive pieces do not chain");
    }
    double d0 = rim_distance(V, chain.front().start());
    double d1 = rim_distance(V, chain.back().end());
    if (d0 > tol || d1 > tol)
      fail(Err::InvalidBoundary, "chain endpoint is not on the domain rim");
  }
}

namespace {

// Rim closure pairing.  Walking the rim ccw from a chain end, the first chain
// start encountered is the one that closes it; pairing by rim position keeps
// the closures local when the region has several components, where storage
// order cannot express the end-to-start matching.
struct ChainEnds {
  std::vector<RimPoint> sp, ep;   // located chain starts and ends
  std::vector<double> sd, ed;     // rim distances of those endpoints
  std::vector<std::size_t> next;  // chain whose start closes each chain's end
  std::vector<double> gap;        // ccw closure extent in piece units, 0 when coincident
};

ChainEnds locate_chain_ends(const Domain& V, const Boundary& b) {
  const double nper = static_cast<double>(rim_pieces(V).size());
  const std::size_t nch = b.chains.size();
  ChainEnds ce;
  ce.sp.resize(nch);
  ce.ep.resize(nch);
  ce.sd.resize(nch);
  ce.ed.resize(nch);
  ce.next.resize(nch);
  ce.gap.resize(nch);
  std::vector<double> sc(nch), ec(nch);
  for (std::size_t k = 0; k < nch; ++k) {
    ce.sp[k] = rim_locate(V, b.chains[k].front().start(), &ce.sd[k]);
    ce.ep[k] = rim_locate(V, b.chains[k].back().end(), &ce.ed[k]);
    sc[k] = ce.sp[k].piece + ce.sp[k].s;
    ec[k] = ce.ep[k].piece + ce.ep[k].s;
  }
  for (std::size_t k = 0; k < nch; ++k) {
    std::size_t jn = k;
    double dn = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nch; ++j) {
      double d = std::fmod(sc[j] - ec[k] + nper, nper);
      // A start a rounding step behind the end counts as coincident, not as a
      // full lap of the rim.
      if (d > nper - 1e-9) d = 0;
      if (d < dn) {
        dn = d;
        jn = j;
      }
    }
    ce.next[k] = jn;
    ce.gap[k] = dn;
  }
  return ce;
}

}  // namespace

double region_area(const Domain& V, const Boundary& b) {
  double av = domain_area(V);
  if (b.chains.empty()) return av;  // empty relative boundary: the region is all of V
  double total = 0;
  for (const auto& chain : b.chains)
    for (const auto& a : chain) total += a.circulation();
  std::size_t n = b.chains.size();
  double diam = domain_diameter(V);
  const ChainEnds ce = locate_chain_ends(V, b);
  for (std::size_t k = 0; k < n; ++k) {
    if (ce.ed[k] > 1e-6 * diam || ce.sd[k] > 1e-6 * diam)
      fail(Err::InvalidBoundary, "chain endpoint is off the rim");
    if (ce.gap[k] > 0) total += rim_walk_circulation(V, ce.ep[k], ce.sp[ce.next[k]]);
  }
  double area = 0.5 * total;
  if (area < -1e-7 * av || area > av * (1 + 1e-7))
    fail(Err::InvalidBoundary, "region area outside [0, area(V)]; chains mis-oriented?");
  return num::clamp(area, 0.0, av);
}

namespace {

CircArc sub_piece(const CircArc& a, double s0, double s1) {
  if (a.is_segment())
    return make_segment(a.p0 + s0 * (a.p1 - a.p0), a.p0 + s1 * (a.p1 - a.p0), a.kind, a.beta);
  return make_arc(a.center, a.radius, a.a0 + s0 * (a.a1 - a.a0), a.a0 + s1 * (a.a1 - a.a0),
                  a.kind, a.beta);
}

// Closed loop bounding the region: the chain pieces plus the exact ccw rim
// closures, each chain end continued to the ccw-nearest chain start.  The
// region lies on the left of every primitive.  A chain whose ends coincide
// closes on itself and contributes no rim part.  Pieces of one component come
// out consecutively so neighbours in the loop share junctions.
std::vector<CircArc> region_loop(const Domain& V, const Boundary& b) {
  std::vector<CircArc> loop;
  const std::size_t nch = b.chains.size();
  if (nch == 0) return loop;
  const auto rim = rim_pieces(V);
  const double tiny = 1e-13 * (1 + domain_diameter(V));
  auto emit = [&](const CircArc& a) {
    if (a.length() > tiny) loop.push_back(a);
  };
  const ChainEnds ce = locate_chain_ends(V, b);
  auto emit_walk = [&](std::size_t k) {
    if (ce.gap[k] == 0.0) return;
    const RimPoint& pe = ce.ep[k];
    const RimPoint& ps = ce.sp[ce.next[k]];
    if (pe.piece == ps.piece && ps.s >= pe.s - 1e-12) {
      emit(sub_piece(rim[pe.piece], pe.s, std::max(pe.s, ps.s)));
      return;
    }
    emit(sub_piece(rim[pe.piece], pe.s, 1.0));
    std::size_t i = (pe.piece + 1) % rim.size();
    while (i != ps.piece) {
      emit(rim[i]);
      i = (i + 1) % rim.size();
    }
    emit(sub_piece(rim[ps.piece], 0.0, ps.s));
  };
  std::vector<char> emitted(nch, 0);
  for (std::size_t k0 = 0; k0 < nch; ++k0) {
    if (emitted[k0]) continue;
    for (std::size_t k = k0;;) {
      for (const CircArc& a : b.chains[k]) emit(a);
      emitted[k] = 1;
      emit_walk(k);
      const std::size_t j = ce.next[k];
      if (j == k0 || emitted[j]) break;
      k = j;
    }
  }
  return loop;
}

// Normal pointing to the region side (left of travel) at parameter s.
Vec2 left_normal_at(const CircArc& a, double s) {
  if (a.is_segment()) {
    const Vec2 t = (a.p1 - a.p0).normalized();
    return Vec2(-t.y(), t.x());
  }
  const double phi = a.a0 + s * (a.a1 - a.a0);
  const Vec2 u(std::cos(phi), std::sin(phi));
  return a.a1 > a.a0 ? Vec2(-u.x(), -u.y()) : u;
}

// Closest point of one primitive; end_idx is -1 for an interior foot,
// 0/1 when the closest point clamps to the start/end.
struct PieceNearest {
  double d2 = 0;
  Vec2 q{0, 0};
  Vec2 n{0, 0};
  int end_idx = -1;
};

PieceNearest nearest_on_piece(const Vec2& p, const CircArc& a) {
  PieceNearest out;
  if (a.is_segment()) {
    const Vec2 d = a.p1 - a.p0;
    const double len2 = d.squaredNorm();
    const double u = len2 > 0 ? (p - a.p0).dot(d) / len2 : 0.0;
    if (u <= 0) {
      out.q = a.p0;
      out.end_idx = 0;
    } else if (u >= 1) {
      out.q = a.p1;
      out.end_idx = 1;
    } else {
      out.q = a.p0 + u * d;
      out.n = left_normal_at(a, u);
    }
    out.d2 = (p - out.q).squaredNorm();
    return out;
  }
  const Vec2 d = p - a.center;
  const double rr = d.norm();
  const double lo = std::min(a.a0, a.a1), span = std::abs(a.a1 - a.a0);
  const double rel = num::wrap_2pi(std::atan2(d.y(), d.x()) - lo);
  if (rr > 0 && rel <= span) {
    const Vec2 u = d / rr;
    out.q = a.center + a.radius * u;
    out.n = a.a1 > a.a0 ? Vec2(-u.x(), -u.y()) : u;
    out.d2 = (p - out.q).squaredNorm();
    return out;
  }
  const double ds = (p - a.start()).squaredNorm();
  const double de = (p - a.end()).squaredNorm();
  if (ds <= de) {
    out.q = a.start();
    out.end_idx = 0;
    out.d2 = ds;
  } else {
    out.q = a.end();
    out.end_idx = 1;
    out.d2 = de;
  }
  return out;
}

}  // namespace

bool point_in_region(const Domain& V, const Boundary& b, const Vec2& p) {
  if (b.chains.empty()) return domain_contains(V, p);
  const std::vector<CircArc> loop = region_loop(V, b);
  if (loop.empty()) return domain_contains(V, p);
  const std::size_t n = loop.size();
  std::size_t best_i = 0;
  PieceNearest best = nearest_on_piece(p, loop[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const PieceNearest c = nearest_on_piece(p, loop[i]);
    if (c.d2 < best.d2) {
      best = c;
      best_i = i;
    }
  }
  // Interior foot: classify by the local normal.  Clamped at a junction:
  // the summed normals of the two incident pieces span the normal cone, so
  // their sum still separates the sides.
  Vec2 nrm = best.n;
  if (best.end_idx == 1)
    nrm = left_normal_at(loop[best_i], 1.0) + left_normal_at(loop[(best_i + 1) % n], 0.0);
  else if (best.end_idx == 0)
    nrm = left_normal_at(loop[best_i], 0.0) + left_normal_at(loop[(best_i + n - 1) % n], 1.0);
  return (p - best.q).dot(nrm) >= 0;
}

double distance_to_region_boundary(const Domain& V, const Boundary& b, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const CircArc& a : region_loop(V, b))
    best = std::min(best, std::sqrt(nearest_on_piece(p, a).d2));
  return best;
}

// --------------------------------------------------------------------------
// Perpendicular crossing arcs
// --------------------------------------------------------------------------

namespace {

// Tangency condition for one circle touching graph 1 at abscissa x and graph
// 2 at abscissa sigma: the normal lines meet at a common center with equal
// distances.  F = 0 encodes it free of square-root sign ambiguity.
double perp_F(const Graph& f1, const Graph& f2, double x, double sigma) {
  double y1 = f1.f(x), d1 = f1.df(x);
  double y2 = f2.f(sigma), d2 = f2.df(sigma);
  return (d1 + d2) * (x - sigma) +
         (y1 - y2) * (d1 * d2 - 1.0 - std::sqrt((d2 * d2 + 1.0) * (d1 * d1 + 1.0)));
}

PerpArc build_perp_arc(const Graph& f1, const Graph& f2, double x, double sigma) {
  Vec2 P1(x, f1.f(x)), P2(sigma, f2.f(sigma));
  double d1 = f1.df(x), d2 = f2.df(sigma);
  // Center of the perpendicular circle: intersection of the two tangent
  // lines; tangent lengths from an external point are equal.
  Vec2 u1(1, d1), u2(1, d2);
  double det = cross(u1, u2);
  if (std::abs(det) < 1e-14 * (1 + std::abs(d1) + std::abs(d2)))
    fail(Err::DegenerateDenominator, "perp arc: parallel tangents");
  double t = cross(P2 - P1, u2) / det;
  Vec2 T = P1 + t * u1;
  double r1 = (T - P1).norm(), r2 = (T - P2).norm();
  if (std::abs(r1 - r2) > 1e-6 * (r1 + r2))
    fail(Err::NoConvergence, "perp arc: tangent lengths disagree");
  double r = 0.5 * (r1 + r2);
  double ang2 = std::atan2(P2.y() - T.y(), P2.x() - T.x());
  double ang1 = std::atan2(P1.y() - T.y(), P1.x() - T.x());
  // Two candidate spans from P2 to P1; take the one passing nearer the
  // corner/curvature maximum at the origin.
  double ccw = num::wrap_2pi(ang1 - ang2);
  Vec2 mid_ccw = T + r * Vec2(std::cos(ang2 + 0.5 * ccw), std::sin(ang2 + 0.5 * ccw));
  Vec2 mid_cw = T + r * Vec2(std::cos(ang2 - 0.5 * (2 * num::kPi - ccw)),
                             std::sin(ang2 - 0.5 * (2 * num::kPi - ccw)));
  double b0 = ang2, b1;
  if (mid_ccw.norm() <= mid_cw.norm())
    b1 = ang2 + ccw;
  else
    b1 = ang2 - (2 * num::kPi - ccw);
  PerpArc out;
  out.arc = make_arc(T, r, b0, b1, ArcKind::controlled, 0);
  out.sigma = sigma;
  out.radius = r;
  out.touch1 = P1;
  out.touch2 = P2;
  return out;
}

double find_perp_sigma(const Graph& f1, const Graph& f2, double x, double lo, double hi) {
  auto F = [&](double s) { return perp_F(f1, f2, x, s); };
  const int n = 96;
  double prev_s = lo, prev_F = F(lo);
  for (int i = 1; i <= n; ++i) {
    double s = lo + (hi - lo) * i / n;
    double Fs = F(s);
    if (prev_F == 0) return prev_s;
    if ((prev_F > 0) != (Fs > 0))
      return num::bisect(F, prev_s, s, 1e-15 * std::abs(x) + 1e-300);
    prev_s = s;
    prev_F = Fs;
  }
  fail(Err::NoBracket, "perp arc: no tangency pair in the scan window");
}

}  // namespace

PerpArc perp_arc_corner(const Graph& f1, const Graph& f2, double x) {
  if (!(x > 0)) fail(Err::OutOfRange, "perp_arc_corner: x must be positive");
  double sigma = find_perp_sigma(f1, f2, x, -3.0 * x, -x / 40.0);
  return build_perp_arc(f1, f2, x, sigma);
}

PerpArc perp_arc_smooth(const SmoothGraph& g, double x) {
  if (!(x > 0)) fail(Err::OutOfRange, "perp_arc_smooth: x must be positive");
  if (std::abs(g.df(0.0)) > 1e-9)
    fail(Err::OutOfRange, "perp_arc_smooth: graph must be critical at 0");
  auto curv = [&](double u) {
    double d = g.df(u);
    return g.ddf(u) / std::pow(1 + d * d, 1.5);
  };
  if (!(curv(0.0) > 0)) fail(Err::NotAMaximum, "curvature at 0 is not positive");
  const double h = 1e-3;
  double w2 = (curv(h) - 2 * curv(0.0) + curv(-h)) / (h * h);
  if (w2 >= -1e-9) fail(Err::NotAMaximum, "curvature has no strict maximum at 0");
  Graph as_graph{g.f, g.df};
  double sigma = find_perp_sigma(as_graph, as_graph, x, -1.75 * x, -0.4 * x);
  return build_perp_arc(as_graph, as_graph, x, sigma);
}

}  // namespace movset::geom
