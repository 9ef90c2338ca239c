#include "movset/dido.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace movset::dido {

using geom::ArcKind;
using geom::Boundary;
using geom::CircArc;
using geom::ConvexPolygon;
using geom::Disc;
using geom::SymmetricCap;
using geom::Vec2;
using geom::Wedge;

namespace {

// t - sin(t)cos(t), series-guarded against cancellation at small t.
double seg_fn(double t) {
  if (std::abs(t) < 1e-3) {
    double t3 = t * t * t;
    return (2.0 / 3.0) * t3 - (2.0 / 15.0) * t3 * t * t;
  }
  return t - std::sin(t) * std::cos(t);
}

// --- disc: circles crossing the rim orthogonally -------------------------

// Area of the small side cut off by the orthogonal circle with aperture psi.
// The cutting circle has radius rho = R tan(psi), center at distance
// R/cos(psi); orthogonality makes the two radii at each crossing orthogonal.
double disc_side_area(double R, double psi) {
  double eta = num::kPi / 2 - psi;
  double rho = R * std::tan(psi);
  return R * R * seg_fn(psi) + rho * rho * seg_fn(eta);
}

DidoCut disc_cut(const Disc& d, double a) {
  double R = d.radius;
  double A = num::kPi * R * R;
  double a_small = std::min(a, A - a);
  DidoCut out;
  out.a = a;
  if (std::abs(a - 0.5 * A) <= 1e-9 * A) {
    // Diameter: the half-area limit of the family (rho diverges there).
    CircArc seg = make_segment(Vec2(0, -R), Vec2(0, R), ArcKind::controlled, 0);
    out.cut = geom::single_chain({seg});
    out.length = 2 * R;
    out.family = CutFamily::diameter;
    if (a > 0.5 * A) out.cut = geom::reversed(out.cut);
    return out;
  }
  double psi = num::bisect([&](double p) { return disc_side_area(R, p) - a_small; }, 1e-9,
                           num::kPi / 2 - 1e-9, 1e-15);
  double eta = num::kPi / 2 - psi;
  double rho = R * std::tan(psi);
  double dctr = R / std::cos(psi);
  // Small side on the left: ccw over the portion of the cutting circle
  // inside the disc.
  CircArc arc = make_arc(Vec2(dctr, 0), rho, num::kPi / 2 + psi, 3 * num::kPi / 2 - psi,
                         ArcKind::controlled, 0);
  out.cut = geom::single_chain({arc});
  out.length = 2 * rho * eta;
  out.family = CutFamily::orthogonal_circle;
  if (a > 0.5 * A) out.cut = geom::reversed(out.cut);
  return out;
}

// --- wedge: corner sectors -----------------------------------------------

DidoCut wedge_cut(const Wedge& w, double a) {
  double A = geom::domain_area(Domain{w});
  double a_small = std::min(a, A - a);
  double s = std::sqrt(a_small / w.alpha);
  DidoCut out;
  out.a = a;
  CircArc arc = make_arc(Vec2(0, 0), s, -w.alpha, w.alpha, ArcKind::controlled, 0);
  out.cut = geom::single_chain({arc});
  out.length = 2 * w.alpha * s;
  out.family = CutFamily::corner_sector;
  out.anchor = 0;
  if (a > 0.5 * A) out.cut = geom::reversed(out.cut);
  return out;
}

// --- convex polygon: corner sectors and edge half-discs ------------------

struct PolyFamily {
  CutFamily family;
  int anchor;
  double capacity;  // largest area this family can cut off
  double theta;     // corner angle (sector families)
  double s_max;
};

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 d = b - a;
  double t = num::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

std::vector<PolyFamily> poly_families(const ConvexPolygon& poly) {
  std::size_t n = poly.verts.size();
  std::vector<PolyFamily> fams;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& v = poly.verts[i];
    const Vec2& nxt = poly.verts[(i + 1) % n];
    const Vec2& prv = poly.verts[(i + n - 1) % n];
    double phi_n = std::atan2((nxt - v).y(), (nxt - v).x());
    double phi_p = std::atan2((prv - v).y(), (prv - v).x());
    double theta = num::wrap_2pi(phi_p - phi_n);
    double s_max = std::min((nxt - v).norm(), (prv - v).norm());
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || (j + 1) % n == i) continue;  // skip edges incident to v
      s_max = std::min(s_max, dist_to_segment(v, poly.verts[j], poly.verts[(j + 1) % n]));
    }
    fams.push_back({CutFamily::corner_sector, int(i), 0.5 * theta * s_max * s_max, theta, s_max});
  }
  for (std::size_t j = 0; j < n; ++j) {
    Vec2 a = poly.verts[j], b = poly.verts[(j + 1) % n];
    Vec2 m = 0.5 * (a + b);
    double s_max = 0.5 * (b - a).norm();
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      s_max = std::min(s_max, dist_to_segment(m, poly.verts[k], poly.verts[(k + 1) % n]));
    }
    fams.push_back({CutFamily::edge_half_disc, int(j), 0.5 * num::kPi * s_max * s_max, num::kPi,
                    s_max});
  }
  return fams;
}

// Reported cut size of a family at cut-off area a.  Corner sectors use the
// sector-radius convention sqrt(2a/theta); half-discs report arc length.
double family_value(const PolyFamily& f, double a) {
  double s = std::sqrt(2 * a / f.theta);
  return f.family == CutFamily::corner_sector ? s : num::kPi * s;
}

DidoCut poly_cut(const ConvexPolygon& poly, double a) {
  double A = geom::domain_area(Domain{poly});
  double a_small = std::min(a, A - a);
  auto fams = poly_families(poly);
  const PolyFamily* best = nullptr;
  double best_val = std::numeric_limits<double>::infinity();
  for (const auto& f : fams) {
    if (f.capacity < a_small) continue;
    double v = family_value(f, a_small);
    if (v < best_val) {
      best_val = v;
      best = &f;
    }
  }
  if (!best) fail(Err::NoBracket, "no cut family reaches the requested area");
  double s = std::sqrt(2 * a_small / best->theta);
  std::size_t n = poly.verts.size();
  DidoCut out;
  out.a = a;
  out.length = best_val;
  out.family = best->family;
  out.anchor = best->anchor;
  if (best->family == CutFamily::corner_sector) {
    const Vec2& v = poly.verts[best->anchor];
    const Vec2& nxt = poly.verts[(best->anchor + 1) % n];
    double phi_n = std::atan2((nxt - v).y(), (nxt - v).x());
    out.cut = geom::single_chain(
        {make_arc(v, s, phi_n, phi_n + best->theta, ArcKind::controlled, 0)});
  } else {
    Vec2 va = poly.verts[best->anchor], vb = poly.verts[(best->anchor + 1) % n];
    Vec2 m = 0.5 * (va + vb);
    double phi = std::atan2((vb - va).y(), (vb - va).x());
    out.cut = geom::single_chain(
        {make_arc(m, s, phi, phi + num::kPi, ArcKind::controlled, 0)});
  }
  if (a > 0.5 * A) out.cut = geom::reversed(out.cut);
  return out;
}

// --- symmetric cap: perpendicular arcs at the curvature maximum ----------

CircArc cap_arc(const SymmetricCap& c, double x) {
  geom::SmoothGraph sg{c.g, c.dg, c.ddg};
  return geom::perp_arc_smooth(sg, x).arc;
}

double cap_pocket_area(const Domain& V, const SymmetricCap& c, double x) {
  return geom::region_area(V, geom::single_chain({cap_arc(c, x)}));
}

DidoCut cap_cut(const Domain& V, const SymmetricCap& c, double a) {
  double A = geom::domain_area(V);
  double a_small = std::min(a, A - a);
  // Scan the family (crown pockets grow with x) for an area bracket.
  double lo = 0, hi = 0, alo = 0, ahi = 0;
  for (int i = 1; i <= 40; ++i) {
    double x = 0.85 * c.half_width * i / 40.0;
    double ax;
    try {
      ax = cap_pocket_area(V, c, x);
    } catch (const Error&) {
      break;  // left the family's validity window
    }
    if (ax >= a_small) {
      hi = x;
      ahi = ax;
      break;
    }
    lo = x;
    alo = ax;
  }
  if (hi == 0) fail(Err::NoBracket, "cap cut family does not reach the requested area");
  (void)alo;
  (void)ahi;
  double x = num::bisect([&](double u) { return cap_pocket_area(V, c, u) - a_small; },
                         std::max(lo, 1e-9), hi, 1e-12 * c.half_width);
  CircArc arc = cap_arc(c, x);
  DidoCut out;
  out.a = a;
  out.cut = geom::single_chain({arc});
  out.length = arc.length();
  out.family = CutFamily::smooth_perp;
  if (a > 0.5 * A) out.cut = geom::reversed(out.cut);
  return out;
}

// --- chord machinery for K_upper -----------------------------------------

// Length of the chord {tau*w + t*u : t in R} cut by V, where u = (cos th,
// sin th) is the chord direction and w = (-sin th, cos th).
double chord_length(const Domain& V, double th, double tau) {
  Vec2 u(std::cos(th), std::sin(th)), w(-std::sin(th), std::cos(th));
  Vec2 base = tau * w;
  double tlo = -std::numeric_limits<double>::infinity();
  double thi = std::numeric_limits<double>::infinity();
  auto clip_halfplane = [&](const Vec2& n, double c) {
    // points p with p.n <= c
    double un = u.dot(n), bn = base.dot(n);
    if (std::abs(un) < 1e-15) {
      if (bn > c) thi = tlo - 1;  // empty
      return;
    }
    double t = (c - bn) / un;
    if (un > 0)
      thi = std::min(thi, t);
    else
      tlo = std::max(tlo, t);
  };
  auto clip_disc = [&](const Vec2& ctr, double R) {
    double proj = (ctr - base).dot(u);
    double d2 = (ctr - base - proj * u).squaredNorm();
    if (d2 >= R * R) {
      thi = tlo - 1;
      return;
    }
    double half = std::sqrt(R * R - d2);
    tlo = std::max(tlo, proj - half);
    thi = std::min(thi, proj + half);
  };
  if (const auto* d = std::get_if<Disc>(&V)) {
    clip_disc(Vec2(0, 0), d->radius);
  } else if (const auto* wd = std::get_if<Wedge>(&V)) {
    double sa = std::sin(wd->alpha), ca = std::cos(wd->alpha);
    clip_halfplane(Vec2(-sa, ca), 0);
    clip_halfplane(Vec2(-sa, -ca), 0);
    clip_disc(Vec2(0, 0), wd->reach);
  } else if (const auto* p = std::get_if<ConvexPolygon>(&V)) {
    std::size_t n = p->verts.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 e = p->verts[(i + 1) % n] - p->verts[i];
      Vec2 nn(e.y(), -e.x());
      nn.normalize();
      clip_halfplane(nn, nn.dot(p->verts[i]));
    }
  } else {
    fail(Err::Unsupported, "chord sweep not available for this domain");
  }
  return std::max(0.0, thi - tlo);
}

double max_chord(const Domain& V, double th, const std::vector<Vec2>& rim_samples) {
  Vec2 w(-std::sin(th), std::cos(th));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : rim_samples) {
    double t = p.dot(w);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  // Chord length is concave in the offset for convex V.
  double tau = num::golden_max([&](double t) { return chord_length(V, th, t); }, lo, hi,
                               1e-10 * (hi - lo) + 1e-14);
  return chord_length(V, th, tau);
}

std::vector<Vec2> sample_rim(const Domain& V, int per_piece = 64) {
  std::vector<Vec2> pts;
  for (const auto& piece : geom::rim_pieces(V))
    for (int k = 0; k <= per_piece; ++k) pts.push_back(piece.point_at(double(k) / per_piece));
  return pts;
}

double directional_K(const Domain& V) {
  auto rs = sample_rim(V);
  const int n = 360;
  double best_th = 0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double th = num::kPi * i / n;
    double v = max_chord(V, th, rs);
    if (v < best) {
      best = v;
      best_th = th;
    }
  }
  double th = num::golden_max(
      [&](double t) { return -max_chord(V, t, rs); }, best_th - num::kPi / n,
      best_th + num::kPi / n, 1e-9);
  return std::min(best, max_chord(V, th, rs));
}

// Total length of the circle |p - v| = r inside the polygon (angular clipping
// with bisection-refined transitions).
double vertex_level_length(const ConvexPolygon& poly, const Vec2& v, double r) {
  Domain V{poly};
  auto inside = [&](double phi) {
    return geom::signed_distance(V, v + r * Vec2(std::cos(phi), std::sin(phi))) <= 0;
  };
  const int n = 2048;
  double total_angle = 0;
  bool prev = inside(0);
  double prev_phi = 0;
  double seg_start = prev ? 0 : -1;
  for (int i = 1; i <= n; ++i) {
    double phi = 2 * num::kPi * i / n;
    bool cur = inside(phi);
    if (cur != prev) {
      double lo = prev_phi, hi = phi;
      for (int k = 0; k < 50; ++k) {
        double mid = 0.5 * (lo + hi);
        if (inside(mid) == prev)
          lo = mid;
        else
          hi = mid;
      }
      double cross_phi = 0.5 * (lo + hi);
      if (prev)
        total_angle += cross_phi - seg_start;
      else
        seg_start = cross_phi;
    }
    prev = cur;
    prev_phi = phi;
  }
  if (prev && seg_start >= 0) total_angle += 2 * num::kPi - seg_start;
  return r * total_angle;
}

double vertex_family_K(const ConvexPolygon& poly, const Vec2& v) {
  double rmax = 0;
  for (const auto& p : poly.verts) rmax = std::max(rmax, (p - v).norm());
  double best = 0, best_r = 0;
  const int n = 256;
  for (int i = 1; i < n; ++i) {
    double r = rmax * i / n;
    double L = vertex_level_length(poly, v, r);
    if (L > best) {
      best = L;
      best_r = r;
    }
  }
  double r = num::golden_max([&](double rr) { return vertex_level_length(poly, v, rr); },
                             std::max(1e-12, best_r - rmax / n), std::min(rmax, best_r + rmax / n),
                             1e-9 * rmax);
  return std::max(best, vertex_level_length(poly, v, r));
}

}  // namespace

const char* family_name(CutFamily f) {
  switch (f) {
    case CutFamily::diameter: return "diameter";
    case CutFamily::orthogonal_circle: return "orthogonal_circle";
    case CutFamily::corner_sector: return "corner_sector";
    case CutFamily::edge_half_disc: return "edge_half_disc";
    case CutFamily::smooth_perp: return "smooth_perp";
  }
  return "unknown";
}

DidoCut dido_cut(const Domain& V, double a) {
  double A = geom::domain_area(V);
  if (!(a > 0 && a < A)) fail(Err::OutOfRange, "dido_cut: area must lie strictly inside (0, area(V))");
  if (const auto* d = std::get_if<Disc>(&V)) return disc_cut(*d, a);
  if (const auto* w = std::get_if<Wedge>(&V)) return wedge_cut(*w, a);
  if (const auto* p = std::get_if<ConvexPolygon>(&V)) return poly_cut(*p, a);
  return cap_cut(V, std::get<SymmetricCap>(V), a);
}

double g_of_a(const Domain& V, double a) {
  // The cut length vanishes continuously at both ends of the area range,
  // where dido_cut itself has no boundary to report.
  double A = geom::domain_area(V);
  if (a >= 0 && a <= A && (a < 1e-12 * A || a > A * (1 - 1e-12))) return 0;
  return dido_cut(V, a).length;
}

double kappa(const Domain& V, int grid) {
  if (std::holds_alternative<SymmetricCap>(V))
    fail(Err::Unsupported, "kappa: cap cut family does not span all areas");
  double A = geom::domain_area(V);
  double best = 0, best_a = 0.5 * A;
  for (int i = 1; i < grid; ++i) {
    double a = A * i / grid;
    double g = g_of_a(V, a);
    if (g > best) {
      best = g;
      best_a = a;
    }
  }
  double lo = std::max(1e-12 * A, best_a - A / grid);
  double hi = std::min(A * (1 - 1e-12), best_a + A / grid);
  double a = num::golden_max([&](double aa) { return g_of_a(V, aa); }, lo, hi, 1e-9 * A);
  return std::max(best, g_of_a(V, a));
}

double K_upper(const Domain& V) {
  if (const auto* d = std::get_if<Disc>(&V)) return 2 * d->radius;
  if (const auto* c = std::get_if<SymmetricCap>(&V)) {
    double x_peak = num::golden_max(c->g, -c->half_width, c->half_width, 1e-12);
    return std::min(c->g(x_peak), 2 * c->half_width);
  }
  double K = directional_K(V);
  if (const auto* p = std::get_if<ConvexPolygon>(&V)) {
    for (const auto& v : p->verts) K = std::min(K, vertex_family_K(*p, v));
  } else if (const auto* w = std::get_if<Wedge>(&V)) {
    K = std::min(K, 2 * w->alpha * w->reach);
  }
  return K;
}

FeasibilityReport eradication_verdict(const Domain& V, double M) {
  FeasibilityReport rep;
  rep.kappa = kappa(V);
  rep.K_upper = K_upper(V);
  if (rep.kappa > rep.K_upper + 1e-9)
    fail(Err::NoConvergence, "invariants out of order: kappa exceeds the sweep bound");
  if (M > rep.K_upper)
    rep.verdict = Verdict::Eradicable;
  else if (M < rep.kappa)
    rep.verdict = Verdict::NotEradicable;
  else
    rep.verdict = Verdict::Unknown;
  double d1 = M - rep.kappa, d2 = M - rep.K_upper;
  rep.margin = std::abs(d1) <= std::abs(d2) ? d1 : d2;
  return rep;
}

}  // namespace movset::dido
