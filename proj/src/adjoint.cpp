#include "movset/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "movset/errors.hpp"
#include "movset/numerics.hpp"

namespace movset::adjoint {

using geom::ArcKind;
using geom::CircArc;
using geom::Vec2;

namespace {

double lerp_sample(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
  return vs[j - 1] + w * (vs[j] - vs[j - 1]);
}

// Nearest point of one piece: returns the parameter in [0,1] and the distance.
std::pair<double, double> project_on_piece(const CircArc& p, const Vec2& q) {
  if (p.is_segment()) {
    const Vec2 d = p.p1 - p.p0;
    const double len2 = d.squaredNorm();
    double s = len2 > 0 ? (q - p.p0).dot(d) / len2 : 0.0;
    s = num::clamp(s, 0.0, 1.0);
    return {s, (q - (p.p0 + s * d)).norm()};
  }
  const double ang = std::atan2(q.y() - p.center.y(), q.x() - p.center.x());
  const double span = p.a1 - p.a0;
  double rel = std::remainder(ang - p.a0, 2 * num::kPi);
  // Choose the representative closest to the spanned interval.
  double s = span != 0 ? rel / span : 0.0;
  if (s < 0 && std::abs(rel - std::copysign(2 * num::kPi, span)) < std::abs(span))
    s = (rel + std::copysign(2 * num::kPi, span)) / span;
  s = num::clamp(s, 0.0, 1.0);
  return {s, (q - p.point_at(s)).norm()};
}

struct Landing {
  std::size_t chain = 0, piece = 0;
  double s = 0;
  double dist = std::numeric_limits<double>::infinity();
};

Landing project_on_boundary(const geom::Boundary& b, const Vec2& q) {
  Landing best;
  for (std::size_t c = 0; c < b.chains.size(); ++c)
    for (std::size_t i = 0; i < b.chains[c].size(); ++i) {
      const auto [s, d] = project_on_piece(b.chains[c][i], q);
      if (d < best.dist) best = {c, i, s, d};
    }
  return best;
}

// Piece-structure signature used to delimit topology-constant windows.
std::vector<int> frame_signature(const MotionFrame& f) {
  std::vector<int> sig;
  for (const auto& ch : f.boundary.chains) {
    sig.push_back(-1);
    for (const CircArc& p : ch)
      sig.push_back((p.kind == ArcKind::controlled ? 2 : 0) + (p.is_segment() ? 1 : 0));
  }
  return sig;
}

}  // namespace

AdjointTrajectory solve_adjoint(const std::vector<double>& times,
                                const std::vector<double>& omega, double kappa1,
                                double kappa2) {
  if (times.size() < 2 || times.size() != omega.size())
    fail(Err::OutOfRange, "need matching time and curvature samples");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1])) fail(Err::OutOfRange, "times must increase strictly");

  AdjointTrajectory tr;
  tr.times = times;
  tr.omega = omega;
  tr.kappa1 = kappa1;
  tr.kappa2 = kappa2;
  const std::size_t n = times.size();

  auto om = [&](double t) { return lerp_sample(times, omega, t); };

  // Forward: A and its running integral, two RK4 substeps per interval.
  tr.A.assign(n, 0.0);
  tr.A[0] = 1.0;
  Vec2 fa(1.0, 0.0);  // (A, integral of A)
  auto frhs = [&](double t, const Vec2& y) { return Vec2(om(t) * y.x(), y.x()); };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = 0.5 * (times[i + 1] - times[i]);
    fa = num::rk4_step(frhs, times[i], fa, dt);
    fa = num::rk4_step(frhs, times[i] + dt, fa, dt);
    tr.A[i + 1] = fa.x();
  }

  // Backward: Y from the horizon.
  tr.Y.assign(n, 0.0);
  tr.Y[n - 1] = kappa2;
  double y = kappa2;
  auto brhs = [&](double t, double v) { return -om(t) * v - kappa1; };
  for (std::size_t i = n - 1; i > 0; --i) {
    const double dt = 0.5 * (times[i] - times[i - 1]);
    y = num::rk4_step(brhs, times[i], y, -dt);
    y = num::rk4_step(brhs, times[i] - dt, y, -dt);
    tr.Y[i - 1] = y;
  }

  const double dual = kappa1 * fa.y() + kappa2 * fa.x();
  tr.duality_residual =
      std::abs(tr.Y[0] - dual) / std::max(std::abs(tr.Y[0]), 1e-300);
  return tr;
}

MaxPrincipleReport check_max_principle(const Motion& motion, double kappa1, double kappa2,
                                       double tol, bool min_time) {
  if (min_time) {
    kappa1 = 0;
    kappa2 = 1;
  }
  MaxPrincipleReport rep;
  const std::vector<MotionFrame>& fr = motion.frames;
  if (fr.size() < 2) return rep;

  auto near_break = [&](double t) {
    for (double b : motion.phase_breaks)
      if (std::abs(t - b) < 1e-12) return true;
    return false;
  };

  // Partition into topology-constant windows; a phase break always starts a
  // new one even when the piece structure is unchanged (the families differ).
  std::vector<std::pair<std::size_t, std::size_t>> wins;
  {
    std::size_t start = 0;
    std::vector<int> sig = frame_signature(fr[0]);
    for (std::size_t k = 1; k < fr.size(); ++k) {
      std::vector<int> s = frame_signature(fr[k]);
      if (s != sig || near_break(fr[k].t)) {
        if (k - 1 > start) wins.emplace_back(start, k - 1);
        start = k;
        sig = std::move(s);
      }
    }
    if (fr.size() - 1 > start) wins.emplace_back(start, fr.size() - 1);
  }

  for (const auto& [w0, w1] : wins) {
    if (frame_signature(fr[w0]).empty()) continue;
    ++rep.windows;

    // Seed trajectories on every piece of the window's first frame.
    struct Track {
      std::string label;
      std::vector<double> omega, beta;
      Vec2 p;
    };
    std::vector<Track> tracks;
    for (std::size_t c = 0; c < fr[w0].boundary.chains.size(); ++c)
      for (std::size_t i = 0; i < fr[w0].boundary.chains[c].size(); ++i) {
        const CircArc& piece = fr[w0].boundary.chains[c][i];
        if (piece.length() < 1e-12) continue;
        for (int k = 0; k < 8; ++k) {
          Track t;
          t.label = "c" + std::to_string(c) + ".p" + std::to_string(i) + ".s" +
                    std::to_string(k);
          const double s = (k + 0.5) / 8;
          t.p = piece.point_at(s);
          t.omega.push_back(piece.signed_curvature());
          t.beta.push_back(piece.beta0 + s * (piece.beta1 - piece.beta0));
          tracks.push_back(std::move(t));
        }
      }

    std::vector<double> wtimes;
    for (std::size_t k = w0; k <= w1; ++k) wtimes.push_back(fr[k].t);
    for (std::size_t k = w0 + 1; k <= w1; ++k) {
      double scale = 1e-9;
      for (const auto& ch : fr[k].boundary.chains)
        for (const CircArc& p : ch) scale = std::max(scale, p.length());
      for (Track& t : tracks) {
        const Landing l = project_on_boundary(fr[k].boundary, t.p);
        if (!std::isfinite(l.dist) || l.dist > 0.25 * scale)
          fail(Err::TrajectoryReconstructionFailed, "marching lost the boundary");
        const CircArc& piece = fr[k].boundary.chains[l.chain][l.piece];
        t.p = piece.point_at(l.s);
        t.omega.push_back(piece.signed_curvature());
        t.beta.push_back(piece.beta0 + l.s * (piece.beta1 - piece.beta0));
      }
    }

    std::vector<AdjointTrajectory> adj;
    for (Track& t : tracks) {
      AdjointTrajectory a = solve_adjoint(wtimes, t.omega, kappa1, kappa2);
      a.xi = t.label;
      adj.push_back(std::move(a));
    }
    rep.trajectories += static_cast<int>(tracks.size());

    for (std::size_t k = 0; k < wtimes.size(); ++k) {
      double ymax = -std::numeric_limits<double>::infinity();
      for (const AdjointTrajectory& a : adj) ymax = std::max(ymax, a.Y[k]);
      const double slack = tol * std::max(1.0, std::abs(ymax));
      for (std::size_t j = 0; j < adj.size(); ++j) {
        if (tracks[j].beta[k] <= -1 + 1e-9) continue;
        const double gap = ymax - adj[j].Y[k];
        rep.worst_Y_gap = std::max(rep.worst_Y_gap, gap);
        if (gap > slack)
          rep.active_below_max.push_back({wtimes[k], adj[j].xi, adj[j].Y[k], ymax});
      }
      // Curvatures of simultaneously controlled arcs must agree.
      double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
      for (const auto& ch : fr[w0 + k].boundary.chains)
        for (const CircArc& p : ch)
          if (p.kind == ArcKind::controlled && !p.is_segment()) {
            cmin = std::min(cmin, 1 / p.radius);
            cmax = std::max(cmax, 1 / p.radius);
          }
      if (cmax > cmin) {
        rep.worst_curvature_gap = std::max(rep.worst_curvature_gap, cmax - cmin);
        if (cmax - cmin > tol) rep.curvature_mismatch_times.push_back(wtimes[k]);
      }
    }
  }
  return rep;
}

JunctionReport check_junctions(const Motion& motion, const Domain& V, double tol_ang) {
  JunctionReport rep;
  const double diam = geom::domain_diameter(V);
  for (const MotionFrame& f : motion.frames) {
    for (const auto& ch : f.boundary.chains) {
      if (ch.empty()) continue;
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        const CircArc& a = ch[i];
        const CircArc& b = ch[i + 1];
        if (a.kind != ArcKind::controlled && b.kind != ArcKind::controlled) continue;
        ++rep.junctions_checked;
        const Vec2 ta = a.tangent_at(1.0);
        const Vec2 tb = b.tangent_at(0.0);
        const double ang = std::acos(num::clamp(ta.dot(tb), -1.0, 1.0));
        rep.worst_tangency_angle = std::max(rep.worst_tangency_angle, ang);
        if (ang > tol_ang) ++rep.tangency_violations;
      }
      const CircArc* endpieces[2] = {&ch.front(), &ch.back()};
      for (int e = 0; e < 2; ++e) {
        const CircArc& p = *endpieces[e];
        if (p.kind != ArcKind::controlled) continue;
        const Vec2 q = e == 0 ? p.start() : p.end();
        double dist = 0;
        geom::rim_locate(V, q, &dist);
        if (dist > 1e-6 * diam) continue;
        ++rep.rim_contacts_checked;
        const double beta_end = e == 0 ? p.beta0 : p.beta1;
        if (std::abs(1 + beta_end) <= 1e-7) continue;  // zero-effort contact
        const Vec2 tp = p.tangent_at(e == 0 ? 0.0 : 1.0);
        const Vec2 tr = geom::rim_tangent(V, q);
        const double ang = std::acos(num::clamp(std::abs(tp.dot(tr)), 0.0, 1.0));
        const double dev = std::abs(num::kPi / 2 - ang);
        rep.worst_rim_angle = std::max(rep.worst_rim_angle, dev);
        if (dev > tol_ang) ++rep.rim_violations;
      }
    }
  }
  return rep;
}

double check_free_arc_condition(const Motion& motion, const FreeArcCrossing& c) {
  if (motion.frames.empty()) fail(Err::TimesNotBracketed, "empty motion");
  const double t_lo = motion.frames.front().t;
  const double t_hi = motion.frames.back().t;
  if (!(c.t1 < c.t2) || c.t1 < t_lo - 1e-12 || c.t2 > t_hi + 1e-12)
    fail(Err::TimesNotBracketed, "crossing window outside the motion span");
  if (c.times.size() < 2 || c.times.size() != c.omega_xi.size() ||
      c.times.size() != c.omega_star.size())
    fail(Err::OutOfRange, "need matching sample arrays");
  double i_xi = 0, i_star = 0;
  for (std::size_t k = 0; k + 1 < c.times.size(); ++k) {
    const double dt = c.times[k + 1] - c.times[k];
    i_xi += 0.5 * dt * (c.omega_xi[k] + c.omega_xi[k + 1]);
    i_star += 0.5 * dt * (c.omega_star[k] + c.omega_star[k + 1]);
  }
  return std::abs(i_xi - i_star);
}

}  // namespace movset::adjoint
