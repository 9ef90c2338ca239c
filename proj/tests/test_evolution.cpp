#include <doctest.h>

#include <cmath>
#include <functional>

#include "movset/dido.hpp"
#include "movset/evolution.hpp"
#include "movset/mintime.hpp"

using namespace movset;
using namespace movset::evo;
using namespace movset::geom;
using num::kPi;

namespace {

const double kSqrt3 = std::sqrt(3.0);

bool throws_with(Err code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Domain unit_triangle() {
  ConvexPolygon tri;
  tri.verts = {Vec2(0, 0), Vec2(1, 0), Vec2(0.5, kSqrt3 / 2)};
  return tri;
}

Domain unit_wedge() {
  ConvexPolygon w;
  w.verts = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1)};
  return w;
}

// Piecewise-linear area readout between stored frames.
double area_at(const Motion& mo, double t) {
  const auto& fr = mo.frames;
  std::size_t i = 0;
  while (i + 2 < fr.size() && fr[i + 1].t < t) ++i;
  const double w = (t - fr[i].t) / (fr[i + 1].t - fr[i].t);
  return fr[i].area * (1 - w) + fr[i + 1].area * w;
}

MotionFrame chord_frame(double t, double c) {
  const double s = std::sqrt(1 - c * c);
  MotionFrame f;
  f.t = t;
  f.boundary =
      single_chain({make_segment(Vec2(c, s), Vec2(c, -s), ArcKind::free_arc, -1.0)});
  f.area = region_area(Disc{1.0}, f.boundary);
  f.rel_perimeter = 2 * s;
  return f;
}

}  // namespace

TEST_CASE("four-phase triangle clearing has a sharp effort threshold") {
  const double s = 3 * kSqrt3;
  CHECK(std::abs(triangle_threshold() - (s - kPi) / 6 / std::log(s / kPi)) < 1e-15);
  CHECK(std::abs(triangle_threshold() - 0.6805135572415594) < 1e-12);

  CHECK(throws_with(Err::BelowThreshold, [] { triangle_strategy(0.68); }));
  TriangleStrategyResult r = triangle_strategy(0.69, 1e-2);
  CHECK(r.motion.status == MotionStatus::Complete);
  CHECK(std::abs(r.T - 4.336071919) < 1e-6);
  CHECK(throws_with(Err::OutOfRange, [] { triangle_strategy(-1.0); }));
}

TEST_CASE("unit-effort triangle clearing pins its shooting constants") {
  TriangleStrategyResult r = triangle_strategy(1.0);
  CHECK(std::abs(r.lambda - (kSqrt3 - kPi / 3)) < 1e-15);
  CHECK(std::abs(r.r_star - 0.5962752050447272) < 1e-12);
  CHECK(std::abs(r.t_star - 0.3388666703057306) < 1e-12);
  CHECK(std::abs(r.T - 0.8702837507009156) < 1e-12);

  // The hand-off radius solves the half-base travel identity and stays below
  // the sector's stalling radius.
  CHECK(std::abs(std::log1p(r.lambda * r.r_star) - r.lambda / 2) < 1e-9);
  CHECK(r.r_star < 3 * r.M / kPi);
  CHECK(std::abs(r.T / 2 - r.t_star - (r.r_star - 0.5)) < 1e-8);

  REQUIRE(r.motion.phase_breaks.size() == 3);
  CHECK(std::abs(r.motion.phase_breaks[0] - r.t_star) < 1e-15);
  CHECK(std::abs(r.motion.phase_breaks[1] - r.T / 2) < 1e-15);
  CHECK(std::abs(r.motion.phase_breaks[2] - (r.T - r.t_star)) < 1e-15);
  CHECK(r.motion.meta.at("r_star") == r.r_star);
  CHECK(r.motion.meta.at("lambda") == r.lambda);

  REQUIRE(r.motion.frames.size() > 100);
  const MotionFrame& first = r.motion.frames.front();
  const MotionFrame& last = r.motion.frames.back();
  CHECK(first.t == 0);
  CHECK(first.boundary.chains.empty());
  CHECK(std::abs(first.area - kSqrt3 / 4) < 1e-15);
  CHECK(std::abs(last.t - r.T) < 1e-12);
  CHECK(last.area == 0);
}

TEST_CASE("triangle clearing time decreases as the effort grows") {
  const double pins[][2] = {
      {0.7, 3.4750}, {0.8, 1.5939}, {0.9, 1.1155}, {1.0, 0.8703}, {1.5, 0.4260}};
  double prev = 1e300;
  for (auto [M, T_pin] : pins) {
    TriangleStrategyResult r = triangle_strategy(M, 1e-2);
    CHECK(std::abs(r.T - T_pin) < 1e-3);
    CHECK(r.T < prev);
    prev = r.T;
  }
}

TEST_CASE("triangle motion is symmetric about its midpoint") {
  TriangleStrategyResult r = triangle_strategy(1.0);
  const double A = kSqrt3 / 4;
  for (int k = 1; k < 60; ++k) {
    const double t = r.T * k / 60.0;
    CHECK(std::abs(area_at(r.motion, t) + area_at(r.motion, r.T - t) - A) < 1e-5 * A);
  }
  for (std::size_t i = 0; i + 1 < r.motion.frames.size(); ++i)
    CHECK(r.motion.frames[i + 1].area <= r.motion.frames[i].area + 1e-12);
}

TEST_CASE("triangle sweep radius obeys the junction advance law") {
  // Differentiating the constant-effort travel relation along the sweep gives
  // dr/dx = (1 + lambda r) / (lambda r) with x the junction abscissa.  The
  // stored frames must follow that field; integrate it step by step with a
  // plain fourth-order scheme and compare radii.
  TriangleStrategyResult R = triangle_strategy(1.0);
  const double lam = R.lambda;
  auto f = [&](double r) { return (1 + lam * r) / (lam * r); };
  auto rk4 = [&](double r, double h) {
    const double k1 = f(r);
    const double k2 = f(r + 0.5 * h * k1);
    const double k3 = f(r + 0.5 * h * k2);
    const double k4 = f(r + h * k3);
    return r + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  };

  double x_prev = R.r_star, r_ode = R.r_star;
  int checked = 0;
  for (const MotionFrame& fr : R.motion.frames) {
    if (fr.t <= R.t_star + 1e-12 || fr.t >= R.T / 2) continue;
    if (fr.boundary.chains.size() != 1 || fr.boundary.chains[0].size() != 2) continue;
    const CircArc& arc = fr.boundary.chains[0][0];
    const double x = arc.center.x() + arc.radius;
    if (x < 0.55) break;
    CHECK(std::abs(arc.center.y() - kSqrt3 * arc.center.x()) < 1e-12);
    // sweep clock: the junction moves at unit speed from the hand-off point
    CHECK(std::abs(x - (R.r_star - (fr.t - R.t_star))) < 1e-12);
    const double h = (x - x_prev) / 4;
    for (int k = 0; k < 4; ++k) r_ode = rk4(r_ode, h);
    x_prev = x;
    CHECK(std::abs(r_ode - arc.radius) < 1e-8);
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("wedge clearing runs both stages out to the far edge") {
  Motion mo = wedge_strategy(1.0, 1.0);
  CHECK(mo.status == MotionStatus::Complete);
  CHECK(std::abs(mo.duration() - 0.7105930446047398) < 1e-8);
  CHECK(std::abs(mo.meta.at("t_transition") - 0.0647657659602198) < 1e-8);
  CHECK(std::abs(mo.meta.at("rho_transition") - 0.6343558866482564) < 1e-8);
  CHECK(mo.meta.at("s_end") == 0.98);
  // What stage 2 leaves behind is the wedge minus the final corner sector.
  CHECK(std::abs(mo.meta.at("residual_area") - (0.5 - kPi / 8 * 0.98 * 0.98)) < 1e-9);
  REQUIRE(mo.phase_breaks.size() == 1);
  CHECK(mo.phase_breaks[0] == mo.meta.at("t_transition"));

  for (std::size_t i = 0; i + 1 < mo.frames.size(); ++i)
    CHECK(mo.frames[i + 1].t > mo.frames[i].t);

  const double t_tr = mo.meta.at("t_transition");
  for (const MotionFrame& f : mo.frames) {
    REQUIRE(f.boundary.chains.size() == 1);
    const CircArc& arc = f.boundary.chains[0][0];
    // every frame spends the whole budget: (1 + beta) * length = M
    CHECK(std::abs((1 + arc.beta) * f.rel_perimeter - 1.0) < 1e-9);
    if (f.t < t_tr) {
      const Vec2 s = arc.start(), e = arc.end();
      CHECK(std::abs(s.x() - s.y()) < 1e-9);  // free endpoint rides the diagonal
      CHECK(e.y() == 0);                      // controlled endpoint stays on the base
    } else {
      CHECK(arc.center.norm() < 1e-12);       // corner-centred sector
    }
  }

  CHECK(throws_with(Err::OutOfRange, [] { wedge_strategy(0.0, 1.0); }));
}

TEST_CASE("wedge frames follow their stage rate laws") {
  Motion mo = wedge_strategy(1.0, 1.0);
  const double t_tr = mo.meta.at("t_transition");
  const double M = 1.0, theta = kPi / 4;

  int n1 = 0, n2 = 0;
  for (std::size_t i = 1; i + 1 < mo.frames.size(); ++i) {
    const CircArc& a0 = mo.frames[i - 1].boundary.chains[0][0];
    const CircArc& a1 = mo.frames[i].boundary.chains[0][0];
    const CircArc& a2 = mo.frames[i + 1].boundary.chains[0][0];
    const double h = mo.frames[i + 1].t - mo.frames[i - 1].t;
    if (mo.frames[i + 1].t < t_tr) {
      // stage 1: the base foot c and radius rho obey the coupled system with
      // phi the aperture at the diagonal contact
      const double phi = kPi / 4 + std::asin(a1.center.x() / (std::sqrt(2.0) * a1.radius));
      const double cdot = M / (a1.radius * (std::sin(phi) - phi * std::cos(phi)));
      const double rhodot = -1 - cdot * std::cos(phi);
      CHECK(std::abs((a2.center.x() - a0.center.x()) / h - cdot) <
            2e-3 * std::max(1.0, std::abs(cdot)));
      CHECK(std::abs((a2.radius - a0.radius) / h - rhodot) <
            2e-3 * std::max(1.0, std::abs(rhodot)));
      ++n1;
    } else if (mo.frames[i - 1].t > t_tr && a0.center.norm() < 1e-12) {
      // stage 2: ds/dt = M/(theta s) - 1
      CHECK(std::abs((a2.radius - a0.radius) / h - (M / (theta * a1.radius) - 1)) < 5e-6);
      ++n2;
    }
  }
  CHECK(n1 > 300);
  CHECK(n2 > 500);
}

TEST_CASE("refitting a disc cut step by step conserves the area balance") {
  Domain disc = Disc{1.0};
  const double M = 3.0, dt = 1e-3;
  MotionFrame f;
  f.t = 0;
  f.boundary = dido::dido_cut(disc, 1.0).cut;
  f.area = region_area(disc, f.boundary);
  f.rel_perimeter = relative_perimeter(f.boundary);

  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    MotionFrame g = generic_step(disc, f, M, dt);
    worst = std::max(worst, std::abs(g.area - (f.area + (f.rel_perimeter - M) * dt)));
    f = g;
  }
  CHECK(worst < 1e-12);

  // first-order stepping tracks the exact area clock
  TimeResult q = mintime::min_time(disc, M, 1.0, f.area);
  REQUIRE(q.finite());
  CHECK(std::abs(*q.T - f.t) < 2e-4);

  // the refit arc is still a perpendicular crossing spending the full budget
  const CircArc& arc = f.boundary.chains[0][0];
  for (double s : {0.0, 1.0}) {
    const Vec2 p = s == 0 ? arc.start() : arc.end();
    CHECK(rim_distance(disc, p) < 1e-9);
    CHECK(std::abs(arc.tangent_at(s).dot(rim_tangent(disc, p))) < 1e-6);
  }
  CHECK(std::abs((1 + arc.beta) * arc.length() - M) < 1e-9);
}

TEST_CASE("a refit step with matched effort leaves the cut in place") {
  Domain disc = Disc{1.0};
  MotionFrame f;
  f.boundary = dido::dido_cut(disc, 1.0).cut;
  f.area = region_area(disc, f.boundary);
  f.rel_perimeter = relative_perimeter(f.boundary);
  MotionFrame g = generic_step(disc, f, f.rel_perimeter, 1e-2);
  CHECK(std::abs(g.area - f.area) < 1e-12);
  CHECK(std::abs(g.rel_perimeter - f.rel_perimeter) < 1e-12);
  CHECK(std::abs(g.boundary.chains[0][0].radius - f.boundary.chains[0][0].radius) < 1e-10);
}

TEST_CASE("a refit step reproduces the stored triangle sweep frame") {
  TriangleStrategyResult R = triangle_strategy(1.0);
  Domain tri = unit_triangle();
  std::size_t i = 0;
  while (!(R.motion.frames[i].t > R.t_star * 1.05 && R.motion.frames[i].t < 0.49 * R.T &&
           R.motion.frames[i].boundary.chains.size() == 1 &&
           R.motion.frames[i].boundary.chains[0].size() == 2))
    ++i;
  const MotionFrame& fa = R.motion.frames[i];
  const MotionFrame& fb = R.motion.frames[i + 1];

  MotionFrame g = generic_step(tri, fa, 1.0, fb.t - fa.t);
  CHECK(std::abs(g.area - fb.area) < 1e-5);
  CHECK(std::abs(g.rel_perimeter - fb.rel_perimeter) < 1e-5);
  REQUIRE(g.boundary.chains.size() == 1);
  REQUIRE(g.boundary.chains[0].size() == 2);
  const CircArc& arc = g.boundary.chains[0][0];
  const CircArc& seg = g.boundary.chains[0][1];
  CHECK(std::abs(arc.radius - fb.boundary.chains[0][0].radius) < 1e-5);
  CHECK((arc.end() - seg.start()).norm() < 1e-12);
  CHECK(std::abs(seg.p1.y()) < 1e-12);  // free foot still on the base
}

TEST_CASE("refit rejects boundary shapes outside its families") {
  Domain disc = Disc{1.0};
  MotionFrame diam;
  diam.boundary = dido::dido_cut(disc, kPi / 2).cut;  // straight controlled chord
  diam.area = kPi / 2;
  diam.rel_perimeter = 2;
  CHECK(throws_with(Err::FitFailed, [&] { generic_step(disc, diam, 3.0, 1e-3); }));

  MotionFrame two;
  two.boundary = dido::dido_cut(disc, 1.0).cut;
  two.boundary.chains.push_back(two.boundary.chains[0]);
  CHECK(throws_with(Err::FitFailed, [&] { generic_step(disc, two, 3.0, 1e-3); }));
}

TEST_CASE("admissibility audit passes the canonical motions") {
  Domain disc = Disc{1.0};
  Motion flow = mintime::dido_flow(disc, 3.0, 1.0);
  AdmissibilityReport rd = admissibility_check(flow, disc, 3.0);
  CHECK(rd.ok());
  CHECK(rd.pairs_checked > 500);
  CHECK(rd.worst_cleared_ratio < 1 + 1e-3);
  CHECK(rd.worst_containment < 1 + 1e-3);

  TriangleStrategyResult R = triangle_strategy(1.0);
  AdmissibilityReport rt = admissibility_check(R.motion, unit_triangle(), 1.0);
  CHECK(rt.ok());
  CHECK(rt.worst_cleared_ratio < 1 + 1e-3);

  Motion W = wedge_strategy(1.0, 1.0);
  AdmissibilityReport rw = admissibility_check(W, unit_wedge(), 1.0);
  CHECK(rw.ok());
  CHECK(rw.worst_cleared_ratio < 1 + 1e-3);
}

TEST_CASE("admissibility audit flags teleporting boundaries") {
  Domain disc = Disc{1.0};
  const double h = 1e-3;

  // jumping into the contaminated side clears area beyond the budget
  Motion east;
  east.frames = {chord_frame(0, 0.3), chord_frame(h, 0.3 + 3 * h)};
  AdmissibilityReport re = admissibility_check(east, disc, 2.0);
  CHECK(!re.ok());
  CHECK(re.cleared_violations == 1);
  CHECK(re.containment_violations == 0);
  CHECK(re.worst_cleared_ratio > 3);

  // retreating faster than unit speed breaks containment
  Motion west;
  west.frames = {chord_frame(0, 0.3), chord_frame(h, 0.3 - 3 * h)};
  AdmissibilityReport rw = admissibility_check(west, disc, 2.0);
  CHECK(!rw.ok());
  CHECK(rw.containment_violations > 0);
  CHECK(rw.cleared_violations == 0);
  CHECK(rw.worst_containment > 2.5);
}

TEST_CASE("free expansion consumes no clearing budget") {
  Domain disc = Disc{1.0};
  const double h = 1e-5;
  Motion mo;
  for (int k = 0; k <= 50; ++k) mo.frames.push_back(chord_frame(h * k, 0.5 - h * k));

  AdmissibilityReport r0 = admissibility_check(mo, disc, 0.0);
  CHECK(r0.ok());
  CHECK(r0.worst_containment < 1 + 1e-6);

  AdmissibilityReport r1 = admissibility_check(mo, disc, 0.05);
  CHECK(r1.ok());
  CHECK(r1.worst_cleared_ratio < 0.01);
}
