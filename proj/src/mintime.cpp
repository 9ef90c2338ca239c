#include "movset/mintime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace movset::mintime {

using geom::CircArc;

namespace {

// Smallest value of M - g on [a_lo, a_hi], with its location (coarse grid
// plus golden refinement; g is continuous and unimodal on each family
// window, so the refined grid minimum is reliable).
std::pair<double, double> min_gap(const Domain& V, double M, double a_lo, double a_hi) {
  const int n = 256;
  double best = std::numeric_limits<double>::infinity(), best_a = 0.5 * (a_lo + a_hi);
  for (int i = 0; i <= n; ++i) {
    double a = a_lo + (a_hi - a_lo) * i / n;
    if (a <= 0 || a >= geom::domain_area(V)) continue;
    double gap = M - dido::g_of_a(V, a);
    if (gap < best) {
      best = gap;
      best_a = a;
    }
  }
  double span = (a_hi - a_lo) / n;
  double lo = std::max(a_lo + 1e-14 * span, best_a - span);
  double hi = std::min(a_hi - 1e-14 * span, best_a + span);
  if (lo < hi) {
    double a =
        num::golden_max([&](double aa) { return dido::g_of_a(V, aa); }, lo, hi, 1e-10 * (a_hi - a_lo));
    double gap = M - dido::g_of_a(V, a);
    if (gap < best) {
      best = gap;
      best_a = a;
    }
  }
  return {best, best_a};
}

}  // namespace

TimeResult min_time(const Domain& V, double M, double a_from, double a_to) {
  double A = geom::domain_area(V);
  if (!(M > 0)) fail(Err::OutOfRange, "min_time: M must be positive");
  if (!(a_to >= 0 && a_to <= a_from && a_from <= A))
    fail(Err::OutOfRange, "min_time: need 0 <= a_to <= a_from <= area(V)");
  TimeResult res;
  const int n_diag = 128;
  for (int i = 0; i <= n_diag; ++i) {
    double a = a_to + (a_from - a_to) * i / n_diag;
    if (a <= 0 || a >= A) continue;
    res.integrand_samples.push_back({a, 1.0 / (M - dido::g_of_a(V, a))});
  }
  if (a_from - a_to <= 0) {
    res.T = 0;
    return res;
  }
  auto [gap, a_star] = min_gap(V, M, a_to, a_from);
  // The integrand blows up at least like 1/(M-g) with a quadratic (or
  // flatter) touch, which is never integrable; treat a vanishing gap as
  // divergence outright.
  if (gap <= 1e-9 * M) return res;
  auto h = [&](double a) { return 1.0 / (M - dido::g_of_a(V, a)); };
  double interior_pad = 1e-6 * (a_from - a_to);
  if (a_star > a_to + interior_pad && a_star < a_from - interior_pad)
    res.T = num::integrate(h, a_to, a_star) + num::integrate(h, a_star, a_from);
  else
    res.T = num::integrate(h, a_to, a_from);
  return res;
}

Motion dido_flow(const Domain& V, double M, double a0, double frame_stride) {
  double A = geom::domain_area(V);
  if (!(a0 > 0 && a0 <= A)) fail(Err::OutOfRange, "dido_flow: a0 must lie in (0, area(V)]");
  if (!(M > 0)) fail(Err::OutOfRange, "dido_flow: M must be positive");
  double dt_body = frame_stride > 0 ? frame_stride : 1e-3 * A / M;
  const double a_floor = 1e-9 * A;
  Motion mo;
  mo.meta["M"] = M;
  mo.meta["a0"] = a0;
  mo.meta["dt_body"] = dt_body;
  // Cut length vanishes at both ends of the area range, where dido_cut is
  // undefined; those states have empty relative boundary.
  auto g_eval = [&](double a) {
    double ac = num::clamp(a, 0.0, A);
    if (ac < 1e-12 * A || ac > A * (1 - 1e-12)) return 0.0;
    return dido::g_of_a(V, ac);
  };
  auto capture = [&](double t, double a) {
    if (a < 1e-12 * A || a > A * (1 - 1e-12)) {
      mo.frames.push_back({t, geom::Boundary{}, a, 0});
      return;
    }
    dido::DidoCut cut = dido::dido_cut(V, a);
    mo.frames.push_back({t, cut.cut, a, cut.length});
  };
  auto rhs = [&](double, double a) { return g_eval(a) - M; };
  double t = 0, a = a0;
  capture(t, a);
  // g carries sqrt-type kinks at a = 0 and a = A, so fixed time steps lose
  // the finite-difference area identity there; steps shrink geometrically
  // (3% of the distance to the nearest end) inside the kink regions and stay
  // uniform at dt_body elsewhere.
  long steps = 0;
  while (a > a_floor) {
    if (++steps > 5'000'000) fail(Err::NoConvergence, "dido_flow: step budget exhausted");
    double gap = M - g_eval(a);
    if (gap <= 1e-9 * M) {
      mo.status = MotionStatus::Stalled;
      mo.stall_area = a;
      return mo;
    }
    double d_end = std::max(std::min(a, A - a), a_floor);
    double dt = std::min(dt_body, (1e-3 * A) / gap);  // area change per frame
    dt = std::min(dt, 0.03 * d_end / gap);
    a = num::rk4_step(rhs, t, a, dt);
    t += dt;
    capture(t, a);
  }
  // Close out the last sliver with the exact time integral over the
  // residual area.
  double tail = num::integrate([&](double aa) { return 1.0 / (M - g_eval(aa)); }, 0, a);
  mo.frames.push_back({t + tail, geom::Boundary{}, 0, 0});
  mo.status = MotionStatus::Complete;
  return mo;
}

namespace {

// Angular spans (ccw intervals) of the circle of radius r around `ctr` that
// lie inside V; transitions refined by bisection.
std::vector<std::pair<double, double>> level_spans(const Domain& V, const Vec2& ctr, double r) {
  auto inside = [&](double phi) {
    return geom::signed_distance(V, ctr + r * Vec2(std::cos(phi), std::sin(phi))) <= 0;
  };
  const int n = 768;
  std::vector<double> crossings;
  bool first = inside(0);
  bool prev = first;
  for (int i = 1; i <= n; ++i) {
    double phi = 2 * num::kPi * i / n;
    // The wrap sample must reuse the phi = 0 status: re-evaluating at 2*pi
    // can land on the other side of the rim by one rounding step, leaving an
    // odd crossing count that breaks the pairing below.
    bool cur = i == n ? first : inside(phi);
    if (cur != prev) {
      double lo = 2 * num::kPi * (i - 1) / n, hi = phi;
      for (int k = 0; k < 55; ++k) {
        double mid = 0.5 * (lo + hi);
        if (inside(mid) == prev)
          lo = mid;
        else
          hi = mid;
      }
      crossings.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  std::vector<std::pair<double, double>> spans;
  if (crossings.empty()) {
    if (first) spans.push_back({0, 2 * num::kPi});
    return spans;
  }
  // Pair up entering/leaving angles; when phi = 0 starts inside, the span
  // containing it wraps from the last entering angle through 0.
  std::size_t start = first ? 1 : 0;
  for (std::size_t i = start; i + 1 < crossings.size(); i += 2)
    spans.push_back({crossings[i], crossings[i + 1]});
  if (first) spans.push_back({crossings.back(), crossings.front() + 2 * num::kPi});
  return spans;
}

geom::Boundary level_chains(const Domain& V, const Vec2& ctr, double r) {
  geom::Boundary b;
  for (auto [a0, a1] : level_spans(V, ctr, r)) {
    // Contamination sits outside the circle, so traverse clockwise.
    b.chains.push_back({make_arc(ctr, r, a1, a0, geom::ArcKind::controlled, 0)});
  }
  return b;
}

double level_length(const Domain& V, const Vec2& ctr, double r) {
  double total = 0;
  for (auto [a0, a1] : level_spans(V, ctr, r)) total += r * (a1 - a0);
  return total;
}

}  // namespace

Motion levelset_eradication(const Domain& V, const Vec2& anchor, double M, double b1,
                            double frame_stride) {
  if (!(M > 0 && b1 > 0)) fail(Err::OutOfRange, "levelset: M and b1 must be positive");
  double A0 = geom::domain_area(V);
  double d_max = 0;
  std::vector<double> breaks;
  if (const auto* poly = std::get_if<geom::ConvexPolygon>(&V)) {
    std::size_t nv = poly->verts.size();
    for (std::size_t j = 0; j < nv; ++j) {
      breaks.push_back((poly->verts[j] - anchor).norm());
      Vec2 a = poly->verts[j], e = poly->verts[(j + 1) % nv] - poly->verts[j];
      double tp = num::clamp((anchor - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
      breaks.push_back((anchor - (a + tp * e)).norm());
    }
  }
  for (const auto& piece : geom::rim_pieces(V))
    for (int k = 0; k <= 64; ++k)
      d_max = std::max(d_max, (piece.point_at(k / 64.0) - anchor).norm());
  for (double rb : breaks) d_max = std::max(d_max, rb);
  // Longest level of the distance field, sampled plus kink radii.
  double sup_level = 0;
  for (int k = 1; k < 512; ++k)
    sup_level = std::max(sup_level, level_length(V, anchor, d_max * k / 512.0));
  for (double rb : breaks)
    for (double r : {rb * (1 - 1e-9), rb * (1 + 1e-9)})
      if (r > 0 && r < d_max) sup_level = std::max(sup_level, level_length(V, anchor, r));
  double thr = M / (1 + b1);
  if (sup_level >= thr)
    fail(Err::SlicingTooLong, "levelset: longest level " + std::to_string(sup_level) +
                                  " reaches the sustainable bound " + std::to_string(thr));
  double rate = b1 * M / (1 + b1);
  double T = A0 / rate;
  Motion mo;
  mo.meta["rate"] = rate;
  mo.meta["T"] = T;
  mo.meta["sup_level"] = sup_level;
  mo.meta["threshold"] = thr;
  mo.meta["d_max"] = d_max;
  mo.frames.push_back({0, geom::Boundary{}, A0, 0});
  double r_prev = 0;
  for (double t = frame_stride; t < T - 1e-12 * T; t += frame_stride) {
    double target = A0 - rate * t;
    double r = num::bisect(
        [&](double rr) { return geom::region_area(V, level_chains(V, anchor, rr)) - target; },
        std::max(r_prev * 0.5, 1e-9 * d_max), d_max * (1 - 1e-12), 1e-12 * d_max);
    mo.frames.push_back({t, level_chains(V, anchor, r), target, level_length(V, anchor, r)});
    r_prev = r;
  }
  mo.frames.push_back({T, geom::Boundary{}, 0, 0});
  mo.status = MotionStatus::Complete;
  return mo;
}

}  // namespace movset::mintime
