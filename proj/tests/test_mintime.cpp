#include <doctest.h>

#include <cmath>

#include "movset/mintime.hpp"

using namespace movset;
using namespace movset::mintime;
using namespace movset::geom;
using num::kPi;

namespace {

// Travel time through the disc's orthogonal-circle family, written directly
// in the aperture variable psi so the check does not reuse the area solver:
// a(psi) = psi + tan^2(psi)(pi/2 - psi) - tan(psi) turns the da integral over
// half the area range into a smooth integrand on [0, pi/2]; the other half
// contributes the same amount by symmetry.
double disc_time_by_aperture(double M) {
  auto f = [&](double psi) {
    double tn = std::tan(psi), sc = 1 + tn * tn, eta = kPi / 2 - psi;
    return 2 * tn * (sc * eta - tn) / (M - 2 * tn * eta);
  };
  const int n = 4000;  // composite Simpson, even interval count
  double h = (kPi / 2) / n;
  // The integrand extends continuously to (4/3)/(M-2) at the pole of tan.
  double s = f(0) + (4.0 / 3.0) / (M - 2);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 2 * (s * h / 3);
}

}  // namespace

TEST_CASE("clearing a disc with budget equal to the diameter takes forever") {
  Domain disc = Disc{1.0};
  CHECK(!min_time(disc, 2.0, kPi).finite());
  CHECK(min_time(disc, 2.02, kPi).finite());
  CHECK(!min_time(disc, 1.0, kPi).finite());
}

TEST_CASE("disc clearing times blow up as the budget approaches the diameter") {
  Domain disc = Disc{1.0};
  double prev = 0;
  for (int k = 1; k <= 3; ++k) {
    TimeResult r = min_time(disc, 2.0 * (1 + std::pow(10.0, -k)), kPi);
    REQUIRE(r.finite());
    CHECK(*r.T > prev);
    prev = *r.T;
  }
  CHECK(prev > 5.0);
}

TEST_CASE("disc clearing time matches the aperture-variable quadrature") {
  Domain disc = Disc{1.0};
  for (double M : {2.2, 3.0}) {
    TimeResult r = min_time(disc, M, kPi);
    REQUIRE(r.finite());
    CHECK(*r.T == doctest::Approx(disc_time_by_aperture(M)).epsilon(1e-6));
  }
}

TEST_CASE("min_time handles degenerate ranges and is monotone in the budget") {
  Domain disc = Disc{1.0};
  TimeResult zero = min_time(disc, 1.0, 0.5, 0.5);
  REQUIRE(zero.finite());
  CHECK(*zero.T == 0.0);

  double t25 = *min_time(disc, 2.5, kPi).T;
  double t30 = *min_time(disc, 3.0, kPi).T;
  double t40 = *min_time(disc, 4.0, kPi).T;
  CHECK(t25 > t30);
  CHECK(t30 > t40);

  // Partial ranges add up.
  double full = *min_time(disc, 3.0, kPi).T;
  double part = *min_time(disc, 3.0, kPi, 1.0).T + *min_time(disc, 3.0, 1.0).T;
  CHECK(part == doctest::Approx(full).epsilon(1e-8));

  CHECK_THROWS_AS(min_time(disc, -1.0, kPi), Error);
  CHECK_THROWS_AS(min_time(disc, 1.0, 0.2, 0.5), Error);
}

TEST_CASE("min_time keeps integrand samples over the requested range") {
  Domain disc = Disc{1.0};
  TimeResult r = min_time(disc, 3.0, kPi);
  CHECK(r.integrand_samples.size() >= 100);
  for (const auto& [a, v] : r.integrand_samples) {
    CHECK(a > 0);
    CHECK(a < kPi);
    CHECK(v > 0);
  }
}

TEST_CASE("wedge clearing time has a logarithmic closed form") {
  // g(a) = c sqrt(a) with c = 2 sqrt(alpha) turns the area integral into
  // (2/c^2) (M log(M/(M - c u0)) - c u0) with u0 = sqrt(a0), valid while a0
  // stays below half the area (beyond that the mirror-side cut takes over).
  Wedge w{kPi / 4, 1.0};
  Domain V{w};
  double M = 2.0, a0 = 0.3;
  double c = 2 * std::sqrt(w.alpha), u0 = std::sqrt(a0);
  double closed = (2 / (c * c)) * (M * std::log(M / (M - c * u0)) - c * u0);
  CHECK(*min_time(V, M, a0).T == doctest::Approx(closed).epsilon(1e-7));

  Motion mo = dido_flow(V, M, a0);
  CHECK(mo.status == MotionStatus::Complete);
  CHECK(mo.duration() == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("dido_flow reaches the quadrature time on the disc") {
  Domain disc = Disc{1.0};
  Motion mo = dido_flow(disc, 3.0, kPi);
  CHECK(mo.status == MotionStatus::Complete);
  CHECK(std::abs(mo.duration() - *min_time(disc, 3.0, kPi).T) < 1e-5);
  CHECK(mo.frames.front().area == doctest::Approx(kPi));
  CHECK(mo.frames.back().area == 0.0);
  CHECK(mo.frames.back().boundary.chains.empty());
  for (std::size_t i = 1; i < mo.frames.size(); ++i) {
    CHECK(mo.frames[i].t > mo.frames[i - 1].t);
    CHECK(mo.frames[i].area < mo.frames[i - 1].area + 1e-15);
  }
}

TEST_CASE("dido_flow frames satisfy the area rate identity") {
  Domain disc = Disc{1.0};
  Motion mo = dido_flow(disc, 3.0, kPi);
  const auto& fr = mo.frames;
  int checked = 0;
  for (std::size_t i = 2; i + 2 < fr.size(); ++i) {
    // Fourth-order stencil; the geometrically shrinking step regions near the
    // ends of the area range drift in relative step size and are skipped.
    double h = fr[i + 1].t - fr[i].t;
    bool uniform = true;
    for (int k = -2; k < 2; ++k)
      uniform = uniform && std::abs(fr[i + k + 1].t - fr[i + k].t - h) < 1e-9 * h;
    if (!uniform) continue;
    double da = (fr[i - 2].area - 8 * fr[i - 1].area + 8 * fr[i + 1].area - fr[i + 2].area) /
                (12 * h);
    CHECK(std::abs(da - (fr[i].rel_perimeter - mo.meta.at("M"))) < 1e-6);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("dido_flow stalls when the cut length meets the budget") {
  Domain disc = Disc{1.0};
  Motion mo = dido_flow(disc, 1.5, kPi / 2);  // the half-area cut is already length 2
  CHECK(mo.status == MotionStatus::Stalled);
  CHECK(mo.stall_area == doctest::Approx(kPi / 2));
  CHECK(mo.frames.size() == 1);

  CHECK_THROWS_AS(dido_flow(disc, 3.0, 2 * kPi), Error);
  CHECK_THROWS_AS(dido_flow(disc, 0.0, 1.0), Error);
}

TEST_CASE("level-set sweep clears the triangle on schedule") {
  Domain tri = unit_triangle();
  double A = domain_area(tri);
  Motion mo = levelset_eradication(tri, Vec2(0, 0), 1.0, 0.1, 0.2);
  CHECK(mo.status == MotionStatus::Complete);
  // T = (1 + b1) A / (b1 M) for the constant-rate schedule.
  CHECK(mo.duration() == doctest::Approx(11 * A).epsilon(1e-12));
  CHECK(mo.meta.at("sup_level") < mo.meta.at("threshold"));
  CHECK(mo.frames.front().area == doctest::Approx(A));
  CHECK(mo.frames.back().area == 0.0);
  for (std::size_t i = 1; i < mo.frames.size(); ++i)
    CHECK(mo.frames[i].area < mo.frames[i - 1].area);

  // Mid-sweep the cleared zone is the near half around the anchor vertex.
  const MotionFrame* mid = nullptr;
  for (const auto& f : mo.frames)
    if (!mid || std::abs(f.t - mo.duration() / 2) < std::abs(mid->t - mo.duration() / 2))
      mid = &f;
  REQUIRE(mid != nullptr);
  REQUIRE(!mid->boundary.chains.empty());
  CHECK(point_in_region(tri, mid->boundary, Vec2(0.9, 0.05)));
  CHECK(!point_in_region(tri, mid->boundary, Vec2(0.2, 0.1)));
  CHECK(region_area(tri, mid->boundary) == doctest::Approx(mid->area).epsilon(1e-6));
}

TEST_CASE("level-set sweep refuses fronts longer than the budget sustains") {
  Domain tri = unit_triangle();
  bool threw = false;
  try {
    levelset_eradication(tri, Vec2(0, 0), 0.5, 1.0);
  } catch (const Error& e) {
    threw = e.code() == Err::SlicingTooLong;
  }
  CHECK(threw);
}
