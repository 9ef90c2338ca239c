#include "movset/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "movset/errors.hpp"
#include "movset/numerics.hpp"

namespace movset::evo {

using geom::ArcKind;
using geom::Boundary;
using geom::CircArc;
using geom::Vec2;

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Frame times for one phase [from, to].  Spacing is capped by `stride` and
// refined geometrically toward the endpoint where the boundary radius
// behaves like sqrt(distance-to-endpoint); without the refinement the
// trapezoidal area identity would not hold at the audit tolerance there.
void phase_marks(std::vector<double>& ts, double from, double to, bool singular_at_start,
                 double stride) {
  const double L = to - from;
  if (L <= 0) return;
  ts.push_back(from);
  ts.push_back(to);
  const double q = 1.0 / 1.045;
  const double d_min = std::max(1e-9, 1e-12 * L);
  for (double d = L * q; d > d_min; d *= q)
    ts.push_back(singular_at_start ? from + d : to - d);
  const int n_uniform = static_cast<int>(std::ceil(L / stride));
  for (int k = 1; k < n_uniform; ++k) ts.push_back(from + L * k / n_uniform);
}

void finish_marks(std::vector<double>& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ts.end());
}

// ---------------------------------------------------------------- triangle

struct TriConsts {
  double M, lambda, r_sharp, r_star, t_star, T, area_V;
};

// Phase-1 sector clock: t(r) = r# ln(r#/(r# - r)) - r, increasing on [0, r#).
double tri_phase1_time(const TriConsts& C, double r) {
  return C.r_sharp * std::log(C.r_sharp / (C.r_sharp - r)) - r;
}

double tri_phase1_radius(const TriConsts& C, double t) {
  if (t <= 0) return 0;
  return num::bisect([&](double r) { return tri_phase1_time(C, r) - t; }, 0.0,
                     C.r_sharp * (1 - 1e-13), 1e-15 * C.r_sharp);
}

// Phase-2 arc radius at junction abscissa x, from the travelled-distance
// relation x - r = (1/lambda) ln((1 + lambda r*)/(1 + lambda r)).
double tri_phase2_radius(const TriConsts& C, double x) {
  const double lam = C.lambda;
  auto H = [&](double r) {
    return (x - r) - (std::log1p(lam * C.r_star) - std::log1p(lam * r)) / lam;
  };
  if (H(C.r_star) >= 0) return C.r_star;
  if (H(0) <= 0) return 0;
  return num::bisect(H, 0.0, C.r_star, 1e-16 * std::max(1.0, C.r_star));
}

MotionFrame tri_frame(const TriConsts& C, double t) {
  MotionFrame f;
  f.t = t;
  const double half_T = 0.5 * C.T;
  const double lam = C.lambda;

  if (t <= 1e-15) {  // initial frame: everything contaminated
    f.area = C.area_V;
    f.rel_perimeter = 0;
    return f;
  }
  if (t >= C.T * (1 - 1e-15)) {  // final frame: cleared
    f.t = C.T;
    f.area = 0;
    f.rel_perimeter = 0;
    return f;
  }

  if (t <= C.t_star) {  // growing sector at the origin corner
    const double r = tri_phase1_radius(C, t);
    if (r < 1e-12) {
      f.area = C.area_V;
      f.rel_perimeter = 0;
      return f;
    }
    CircArc arc = geom::make_arc(Vec2(0, 0), r, num::kPi / 3, 0.0, ArcKind::controlled,
                                 3 * C.M / (num::kPi * r) - 1);
    f.boundary = geom::single_chain({arc});
    f.area = C.area_V - num::kPi * r * r / 6;
    f.rel_perimeter = num::kPi * r / 3;
    return f;
  }

  if (t <= half_T + 1e-15 && t >= half_T - 1e-15) {  // midpoint: the full altitude
    f.t = half_T;
    CircArc seg =
        geom::make_segment(Vec2(0.5, kSqrt3 / 2), Vec2(0.5, 0), ArcKind::free_arc, -1.0);
    f.boundary = geom::single_chain({seg});
    f.area = C.area_V - kSqrt3 / 8;
    f.rel_perimeter = kSqrt3 / 2;
    return f;
  }

  auto sweep_frame = [&](double x, bool mirrored) {
    const double r = tri_phase2_radius(C, x);
    std::vector<CircArc> chain;
    const double beta_mean = 3 * C.M / (num::kPi * r) - 1;
    if (!mirrored) {
      // Arc centred on the left edge, trailing free segment down to the base.
      CircArc arc = geom::make_arc(Vec2(x - r, kSqrt3 * (x - r)), r, num::kPi / 3, 0.0,
                                   ArcKind::controlled, beta_mean);
      arc.beta0 = 1 / (lam * r) - 1;
      arc.beta1 = -1;
      chain.push_back(arc);
      if (kSqrt3 * (x - r) > 1e-14)
        chain.push_back(geom::make_segment(Vec2(x, kSqrt3 * (x - r)), Vec2(x, 0),
                                           ArcKind::free_arc, -1.0));
    } else {
      // Mirror image about x = 1/2: arc centred on the right edge.
      CircArc arc = geom::make_arc(Vec2(1 - x + r, kSqrt3 * (x - r)), r, 2 * num::kPi / 3,
                                   num::kPi, ArcKind::controlled, beta_mean);
      arc.beta0 = 1 / (lam * r) - 1;
      arc.beta1 = -1;
      chain.push_back(arc);
      if (kSqrt3 * (x - r) > 1e-14)
        chain.push_back(geom::make_segment(Vec2(1 - x, kSqrt3 * (x - r)), Vec2(1 - x, 0),
                                           ArcKind::free_arc, -1.0));
    }
    const double cleared =
        kSqrt3 / 2 * x * x - (kSqrt3 / 2 - num::kPi / 6) * r * r;
    f.boundary = geom::single_chain(std::move(chain));
    f.area = mirrored ? cleared : C.area_V - cleared;
    f.rel_perimeter = num::kPi * r / 3 + kSqrt3 * (x - r);
  };

  if (t < half_T) {  // sweep toward the altitude
    sweep_frame(C.r_star - (t - C.t_star), false);
    return f;
  }
  if (t <= C.T - C.t_star) {  // mirrored sweep away from the altitude
    sweep_frame(C.r_star - (C.T - t - C.t_star), true);
    return f;
  }
  // shrinking sector at the far corner
  const double rho = tri_phase1_radius(C, C.T - t);
  if (rho < 1e-12) {
    f.t = C.T;
    f.area = 0;
    f.rel_perimeter = 0;
    return f;
  }
  CircArc arc = geom::make_arc(Vec2(1, 0), rho, 2 * num::kPi / 3, num::kPi,
                               ArcKind::controlled, 3 * C.M / (num::kPi * rho) - 1);
  f.boundary = geom::single_chain({arc});
  f.area = num::kPi * rho * rho / 6;
  f.rel_perimeter = num::kPi * rho / 3;
  return f;
}

// ------------------------------------------------------------------ wedge

// sin(phi) - phi*cos(phi), series below 0.05 to avoid cancellation.
double sin_minus_phi_cos(double phi) {
  if (std::abs(phi) < 0.05) {
    const double p2 = phi * phi;
    return phi * p2 * (1.0 / 3 - p2 / 30 + p2 * p2 / 840);
  }
  return std::sin(phi) - phi * std::cos(phi);
}

struct WedgeRates {
  double phi_B, cdot, rhodot;
};

WedgeRates wedge_rates(double M, double c, double rho) {
  const double u = c / (std::sqrt(2.0) * rho);
  if (std::abs(u) > 1 - 1e-12) fail(Err::StageOneDiverged, "arc lost the diagonal contact");
  const double phi_B = num::kPi / 4 + std::asin(u);
  const double denom = sin_minus_phi_cos(phi_B);
  const double cdot = M / (rho * denom);
  const double rhodot = -1 - cdot * std::cos(phi_B);
  return {phi_B, cdot, rhodot};
}

MotionFrame wedge_stage1_frame(const Domain& V, double M, double t, double c,
                               double rho) {
  const WedgeRates R = wedge_rates(M, c, rho);
  CircArc arc =
      geom::make_arc(Vec2(c, 0), rho, R.phi_B, 0.0, ArcKind::controlled,
                     M / (rho * R.phi_B) - 1);
  arc.beta0 = -1;                  // free retreat of the diagonal endpoint
  arc.beta1 = R.rhodot + R.cdot;   // base endpoint
  MotionFrame f;
  f.t = t;
  f.boundary = geom::single_chain({arc});
  f.area = geom::region_area(V, f.boundary);
  f.rel_perimeter = rho * R.phi_B;
  return f;
}

// ---------------------------------------------------------- generic_step

Vec2 right_normal(const Vec2& t) { return Vec2(t.y(), -t.x()); }

// One-parameter family for a lone controlled arc perpendicular to a disc rim:
// centre at distance R/cos(psi) along the fixed axis, radius R tan(psi).
CircArc disc_orthogonal_arc(double R, const Vec2& axis, double psi, bool ccw) {
  const double phi_u = std::atan2(axis.y(), axis.x());
  CircArc a = geom::make_arc(axis * (R / std::cos(psi)), R * std::tan(psi),
                             phi_u + num::kPi / 2 + psi, phi_u + 3 * num::kPi / 2 - psi,
                             ArcKind::controlled, 0.0);
  return ccw ? a : geom::reversed(a);
}

}  // namespace

double triangle_threshold() {
  const double s = 3 * kSqrt3;
  return (s - num::kPi) / 6 / std::log(s / num::kPi);
}

TriangleStrategyResult triangle_strategy(double M, double frame_stride) {
  if (!(M > 0)) fail(Err::OutOfRange, "effort must be positive");
  if (!(frame_stride > 0)) fail(Err::OutOfRange, "frame stride must be positive");

  TriConsts C;
  C.M = M;
  C.lambda = (kSqrt3 - num::kPi / 3) / M;
  C.r_sharp = 3 * M / num::kPi;
  C.area_V = kSqrt3 / 4;

  // Shooting relation for the hand-off radius: the sweep that starts at r and
  // reaches the altitude must have travelled exactly 1/2.
  auto F = [&](double r) { return std::log1p(C.lambda * r) / C.lambda - 0.5; };
  const double hi = C.r_sharp * (1 - 1e-12);
  if (hi <= 0.5 || F(hi) <= 0)
    fail(Err::BelowThreshold, "effort too small for the four-phase strategy");
  if (F(0.5) >= 0) fail(Err::ShootingFailed, "no bracket for the hand-off radius");
  C.r_star = num::bisect(F, 0.5, hi, 1e-16);
  C.t_star = tri_phase1_time(C, C.r_star);
  C.T = 2 * (C.t_star + C.r_star - 0.5);

  std::vector<double> ts;
  phase_marks(ts, 0, C.t_star, /*singular_at_start=*/true, frame_stride);
  phase_marks(ts, C.t_star, 0.5 * C.T, false, frame_stride);
  phase_marks(ts, 0.5 * C.T, C.T - C.t_star, true, frame_stride);
  phase_marks(ts, C.T - C.t_star, C.T, false, frame_stride);
  finish_marks(ts);

  TriangleStrategyResult out;
  out.M = M;
  out.r_star = C.r_star;
  out.t_star = C.t_star;
  out.T = C.T;
  out.lambda = C.lambda;
  out.motion.status = MotionStatus::Complete;
  out.motion.phase_breaks = {C.t_star, 0.5 * C.T, C.T - C.t_star};
  out.motion.frames.reserve(ts.size());
  for (double t : ts) out.motion.frames.push_back(tri_frame(C, t));
  out.motion.meta["M"] = M;
  out.motion.meta["T"] = C.T;
  out.motion.meta["r_star"] = C.r_star;
  out.motion.meta["t_star"] = C.t_star;
  out.motion.meta["r_sharp"] = C.r_sharp;
  out.motion.meta["lambda"] = C.lambda;
  return out;
}

Motion wedge_strategy(double K, double M) {
  if (!(K > 0) || !(M > 0)) fail(Err::OutOfRange, "K and M must be positive");
  geom::ConvexPolygon W;
  W.verts = {Vec2(0, 0), Vec2(K, 0), Vec2(K, K)};
  const Domain V = W;

  Motion mo;
  mo.status = MotionStatus::Complete;
  mo.meta["M"] = M;
  mo.meta["K"] = K;
  // Stage-1 closure: the free endpoint on the diagonal plus the effort
  // identity determine (c, rho) without further conditions.
  mo.meta["closure_free_endpoint_effort_identity"] = 1;

  // Start deep in the singular regime where the arc is nearly the straight
  // mid-chord x1 = K/2; rho(t) = K^3/(24 M t) there.
  const double rho0 = 1e3 * K;
  double rho = rho0;
  Vec2 S(K * K * K / (24 * M * rho0), K / 2 - rho0);  // (t, c)
  mo.meta["t_first_frame"] = S.x();
  mo.meta["rho0"] = rho0;

  auto rhs = [&](double r, const Vec2& y) {
    const WedgeRates R = wedge_rates(M, y.y(), r);
    return Vec2(1 / R.rhodot, R.cdot / R.rhodot);
  };
  auto step_to = [&](double r_from, const Vec2& y, double r_to) {
    return num::rk4_step(rhs, r_from, y, r_to - r_from);
  };

  mo.frames.push_back(wedge_stage1_frame(V, M, S.x(), S.y(), rho));
  // Adaptive radius step: 2% of rho, further capped so consecutive frames are
  // at most ~1e-3*M apart in time (the admissibility audit's collar scale).
  double t_tr = 0, rho_tr = 0;
  bool closed = false;
  for (int it = 0; it < 1000000 && !closed; ++it) {
    const WedgeRates R = wedge_rates(M, S.y(), rho);
    double drho = std::min(0.02 * rho, 1e-3 * M * std::abs(R.rhodot));
    drho = std::max(drho, 1e-9 * K);
    const double r_next = rho - drho;
    const Vec2 S_next = step_to(rho, S, r_next);
    if (S_next.y() >= 0) {  // crossed the perpendicular configuration at B
      double lo = 0, hi = 1;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        (step_to(rho, S, rho - mid * drho).y() >= 0 ? hi : lo) = mid;
      }
      const double r_hit = rho - hi * drho;
      const Vec2 Sh = step_to(rho, S, r_hit);
      t_tr = Sh.x();
      rho_tr = r_hit;
      closed = true;
      break;
    }
    S = S_next;
    rho = r_next;
    mo.frames.push_back(wedge_stage1_frame(V, M, S.x(), S.y(), rho));
  }
  if (!closed) fail(Err::StageOneDiverged, "stage 1 never reached the corner configuration");
  mo.phase_breaks = {t_tr};
  mo.meta["t_transition"] = t_tr;
  mo.meta["rho_transition"] = rho_tr;

  // Stage 2: arcs centred at the clean corner spanning the fixed aperture
  // pi/4, growing by ds/dt = M/(theta s) - 1.
  const double theta = num::kPi / 4;
  const double s_end = 0.98 * K;
  auto stage2_frame = [&](double t, double s) {
    CircArc arc = geom::make_arc(Vec2(0, 0), s, theta, 0.0, ArcKind::controlled,
                                 M / (theta * s) - 1);
    MotionFrame f;
    f.t = t;
    f.boundary = geom::single_chain({arc});
    f.area = geom::region_area(V, f.boundary);
    f.rel_perimeter = s * theta;
    return f;
  };
  auto stage2_time = [&](double s) {
    return t_tr + (rho_tr - s) + M / theta * std::log((M - theta * rho_tr) / (M - theta * s));
  };

  mo.frames.push_back(stage2_frame(t_tr, rho_tr));
  if (M <= theta * rho_tr * (1 + 1e-9)) {  // growth rate vanishes at s = M/theta
    mo.status = MotionStatus::Stalled;
    mo.stall_area = mo.frames.back().area;
    mo.meta["s_end"] = rho_tr;
    mo.meta["residual_area"] = mo.frames.back().area;
    return mo;
  }
  double s_stop = s_end;
  if (M <= theta * s_end) {
    mo.status = MotionStatus::Stalled;
    s_stop = M / theta * (1 - 1e-3);
  }
  const int n2 = 600;
  for (int k = 1; k <= n2; ++k) {
    const double s = rho_tr + (s_stop - rho_tr) * k / n2;
    mo.frames.push_back(stage2_frame(stage2_time(s), s));
  }
  mo.meta["s_end"] = s_stop;
  const MotionFrame& last = mo.frames.back();
  mo.meta["residual_area"] = last.area;
  if (mo.status == MotionStatus::Stalled) mo.stall_area = last.area;
  return mo;
}

MotionFrame generic_step(const Domain& V, const MotionFrame& frame, double M, double dt) {
  if (frame.boundary.chains.size() != 1)
    fail(Err::FitFailed, "single-chain frames only");
  const std::vector<CircArc>& chain = frame.boundary.chains[0];

  int arc_idx = -1, seg_idx = -1;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const CircArc& p = chain[i];
    if (p.kind == ArcKind::controlled && !p.is_segment()) {
      if (arc_idx >= 0) fail(Err::FitFailed, "more than one controlled arc");
      arc_idx = static_cast<int>(i);
    } else if (p.kind == ArcKind::free_arc && p.is_segment()) {
      if (seg_idx >= 0) fail(Err::FitFailed, "more than one free piece");
      seg_idx = static_cast<int>(i);
    } else {
      fail(Err::FitFailed, "unsupported piece combination");
    }
  }
  if (arc_idx < 0) fail(Err::FitFailed, "no controlled arc to re-fit");
  const CircArc& arc = chain[arc_idx];
  const double target = frame.area + (frame.rel_perimeter - M) * dt;
  const double diam = geom::domain_diameter(V);

  auto solved = [&](std::vector<CircArc> pieces) {
    MotionFrame f;
    f.t = frame.t + dt;
    f.boundary = geom::single_chain(std::move(pieces));
    f.area = geom::region_area(V, f.boundary);
    f.rel_perimeter = geom::relative_perimeter(f.boundary);
    return f;
  };

  if (seg_idx < 0) {  // lone controlled arc anchored to the rim
    if (const auto* D = std::get_if<geom::Disc>(&V)) {
      const Vec2 axis = arc.center.normalized();
      const bool ccw = arc.a1 > arc.a0;
      const double psi_now = std::atan(arc.radius / D->radius);
      auto area_at = [&](double psi) {
        CircArc cand = disc_orthogonal_arc(D->radius, axis, psi, ccw);
        cand.beta = cand.beta0 = cand.beta1 = 0;
        return geom::region_area(V, geom::single_chain({cand}));
      };
      double lo = psi_now, hi = psi_now, w = 0.05;
      for (int k = 0; k < 12; ++k) {
        lo = std::max(1e-9, psi_now - w);
        hi = std::min(num::kPi / 2 - 1e-9, psi_now + w);
        if ((area_at(lo) - target) * (area_at(hi) - target) <= 0) break;
        w *= 2;
        if (k == 11) fail(Err::FitFailed, "no bracketing aperture");
      }
      const double psi =
          num::bisect([&](double p) { return area_at(p) - target; }, lo, hi, 1e-14);
      CircArc fit = disc_orthogonal_arc(D->radius, axis, psi, ccw);
      const double len = fit.length();
      fit.beta = fit.beta0 = fit.beta1 = (len > 0 ? M / len - 1 : -1);
      return solved({fit});
    }
    // Polygon and wedge rims: grow or shrink about the fixed centre.
    auto area_at = [&](double r) {
      CircArc cand = geom::make_arc(arc.center, r, arc.a0, arc.a1, ArcKind::controlled, 0.0);
      return geom::region_area(V, geom::single_chain({cand}));
    };
    double lo = arc.radius, hi = arc.radius, w = 0.05 * arc.radius;
    for (int k = 0; k < 14; ++k) {
      lo = std::max(1e-9 * diam, arc.radius - w);
      hi = arc.radius + w;
      if ((area_at(lo) - target) * (area_at(hi) - target) <= 0) break;
      w *= 2;
      if (k == 13) fail(Err::FitFailed, "no bracketing radius");
    }
    const double r = num::bisect([&](double x) { return area_at(x) - target; }, lo, hi,
                                 1e-15 * diam);
    CircArc fit = geom::make_arc(arc.center, r, arc.a0, arc.a1, ArcKind::controlled,
                                 M / (r * std::abs(arc.a1 - arc.a0)) - 1);
    return solved({fit});
  }

  // Controlled arc joined to one free segment.  The segment's line advances
  // by dt along its right normal; the arc keeps its centre on the rim edge
  // carrying its outer endpoint and stays tangent to the advanced line.
  const CircArc& seg = chain[seg_idx];
  const Vec2 tdir = (seg.p1 - seg.p0).normalized();
  const Vec2 n = right_normal(tdir);
  const Vec2 A0 = seg.p0 + dt * n;

  const bool arc_first = arc_idx < seg_idx;
  const Vec2 outer_old = arc_first ? arc.start() : arc.end();
  const Vec2 far_old = arc_first ? seg.p1 : seg.p0;

  double d_outer = 0;
  const geom::RimPoint rp = geom::rim_locate(V, outer_old, &d_outer);
  if (d_outer > 1e-6 * diam) fail(Err::FitFailed, "arc endpoint not on the rim");
  const std::vector<CircArc> rim = geom::rim_pieces(V);
  const CircArc& edge = rim[rp.piece];
  if (!edge.is_segment()) fail(Err::FitFailed, "arc endpoint must sit on a straight edge");
  const Vec2 q0 = edge.p0;
  const Vec2 wdirn = (edge.p1 - edge.p0).normalized();
  const double wn = wdirn.dot(n);
  if (std::abs(wn) < 1e-12) fail(Err::FitFailed, "edge parallel to the free segment");

  double d_far = 0;
  const geom::RimPoint rpf = geom::rim_locate(V, far_old, &d_far);
  if (d_far > 1e-6 * diam) fail(Err::FitFailed, "segment endpoint not on the rim");
  const CircArc& fedge = rim[rpf.piece];
  if (!fedge.is_segment()) fail(Err::FitFailed, "segment endpoint must sit on a straight edge");
  const Vec2 fn = right_normal((fedge.p1 - fedge.p0).normalized());
  if (std::abs(tdir.dot(fn)) < 1e-12) fail(Err::FitFailed, "free segment parallel to its edge");

  const double sign_n = ((arc.center - seg.p0).dot(n) > 0) ? 1.0 : -1.0;
  const double sign_w = ((outer_old - arc.center).dot(wdirn) > 0) ? 1.0 : -1.0;
  const double span_sign = (arc.a1 > arc.a0) ? 1.0 : -1.0;

  auto build = [&](double r) {
    const Vec2 c = q0 + wdirn * ((sign_n * r - (q0 - A0).dot(n)) / wn);
    const Vec2 j = c - sign_n * r * n;
    const Vec2 rim_dir = sign_w * wdirn;
    const double a_rim = std::atan2(rim_dir.y(), rim_dir.x());
    const Vec2 jun_dir = -sign_n * n;
    double a_jun = std::atan2(jun_dir.y(), jun_dir.x());
    double a0 = arc_first ? a_rim : a_jun;
    double a1 = arc_first ? a_jun : a_rim;
    while ((a1 - a0) * span_sign <= 0) a1 += span_sign * 2 * num::kPi;
    CircArc na = geom::make_arc(c, r, a0, a1, ArcKind::controlled, 0.0);
    const Vec2 fq = fedge.p0;
    const double tfar = (fq - j).dot(fn) / tdir.dot(fn);
    const Vec2 far_new = j + tfar * tdir;
    CircArc ns = arc_first ? geom::make_segment(j, far_new, ArcKind::free_arc, -1.0)
                           : geom::make_segment(far_new, j, ArcKind::free_arc, -1.0);
    std::vector<CircArc> pieces;
    if (arc_first) {
      pieces = {na, ns};
    } else {
      pieces = {ns, na};
    }
    return pieces;
  };
  auto area_at = [&](double r) {
    return geom::region_area(V, geom::single_chain(build(r)));
  };

  double lo = arc.radius, hi = arc.radius, w = 0.1 * arc.radius;
  for (int k = 0; k < 12; ++k) {
    lo = std::max(1e-9 * diam, arc.radius - w);
    hi = arc.radius + w;
    if ((area_at(lo) - target) * (area_at(hi) - target) <= 0) break;
    w *= 2;
    if (k == 11) fail(Err::FitFailed, "no bracketing radius for the joined fit");
  }
  const double r = num::bisect([&](double x) { return area_at(x) - target; }, lo, hi,
                               1e-15 * diam);
  std::vector<CircArc> pieces = build(r);
  for (CircArc& p : pieces) {
    if (p.kind == ArcKind::controlled) {
      const double len = p.length();
      p.beta = p.beta0 = p.beta1 = (len > 0 ? M / len - 1 : -1);
    }
  }
  return solved(std::move(pieces));
}

AdmissibilityReport admissibility_check(const Motion& motion, const Domain& V, double M,
                                        double tol_eff) {
  AdmissibilityReport rep;
  const double diam = geom::domain_diameter(V);
  const int n_samples = 16;

  for (std::size_t k = 0; k + 1 < motion.frames.size(); ++k) {
    const MotionFrame& f0 = motion.frames[k];
    const MotionFrame& f1 = motion.frames[k + 1];
    const double h = f1.t - f0.t;
    if (h <= 1e-12) continue;
    ++rep.pairs_checked;

    // (1) containment: the next set must stay inside V and within h of the
    // previous one.  Material boundary speeds never exceed 1 outward, so the
    // exact distances are <= h; the slack only absorbs roundoff.
    for (const std::vector<CircArc>& ch : f1.boundary.chains) {
      for (const CircArc& piece : ch) {
        if (piece.length() < 1e-12 * diam) continue;
        for (int i = 0; i < n_samples; ++i) {
          const Vec2 p = piece.point_at((i + 0.5) / n_samples);
          if (geom::signed_distance(V, p) > 1e-6 * diam) {
            ++rep.containment_violations;
            continue;
          }
          if (geom::point_in_region(V, f0.boundary, p)) continue;
          const double d = geom::distance_to_region_boundary(V, f0.boundary, p);
          rep.worst_containment = std::max(rep.worst_containment, d / h);
          if (d > h * (1 + tol_eff) + 1e-9 * diam) ++rep.containment_violations;
        }
      }
    }

    // (2) cleared budget: area of (V ∩ B_h(Ω(t))) \ Ω(t+h), from the band
    // around the relative boundary.  The length factor averages the two
    // frames (the boundary length drifts at O(1) along the motion, and the
    // one-sided rectangle would smuggle an O(h) error into the ratio); the
    // curvature collar is (h^2/2)·signed span per arc of the leading frame.
    // At a rim endpoint whose offset direction leaves or hugs the rim, the
    // band is clipped by V (or gains a fan), handled by the endpoint term
    // below.  Junction wedges between adjacent pieces vanish for tangential
    // junctions.
    double len0 = 0, len1 = 0;
    for (const std::vector<CircArc>& ch : f0.boundary.chains)
      for (const CircArc& piece : ch) len0 += piece.length();
    for (const std::vector<CircArc>& ch : f1.boundary.chains)
      for (const CircArc& piece : ch) len1 += piece.length();
    double band = 0.5 * h * (len0 + len1);
    for (const std::vector<CircArc>& ch : f0.boundary.chains) {
      for (const CircArc& piece : ch) {
        if (!piece.is_segment()) {
          const double s = (piece.a1 > piece.a0) ? 1.0 : -1.0;
          band += 0.5 * h * h * s * std::abs(piece.a1 - piece.a0);
        }
      }
      if (!ch.empty()) {
        const Vec2 ends[2] = {ch.front().start(), ch.back().end()};
        const Vec2 dirs[2] = {right_normal(ch.front().tangent_at(0.0)),
                              right_normal(ch.back().tangent_at(1.0))};
        for (int e = 0; e < 2; ++e) {
          double dist = 0;
          geom::rim_locate(V, ends[e], &dist);
          if (dist > 1e-6 * diam) continue;
          const Vec2 n_out = right_normal(geom::rim_tangent(V, ends[e]));
          const double chi = dirs[e].dot(n_out);
          band -= 0.5 * h * h * chi / std::sqrt(std::max(1e-12, 1 - chi * chi));
        }
      }
    }
    const double cleared = band - (f1.area - f0.area);
    rep.worst_cleared_ratio = std::max(rep.worst_cleared_ratio, cleared / (M * h));
    if (cleared > M * h * (1 + tol_eff) + 1e-10 * diam * diam) ++rep.cleared_violations;
  }
  return rep;
}

}  // namespace movset::evo
