#include <doctest.h>

#include <cmath>

#include "movset/dido.hpp"

using namespace movset;
using namespace movset::dido;
using namespace movset::geom;
using num::kPi;

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Shared shape invariants of any reported cut: chains are valid, endpoints
// sit on the rim, crossings are perpendicular, and the left side has area a.
void check_cut_shape(const Domain& V, const DidoCut& cut) {
  REQUIRE(!cut.cut.chains.empty());
  CHECK_NOTHROW(validate_boundary(V, cut.cut));
  CHECK(region_area(V, cut.cut) == doctest::Approx(cut.a).epsilon(1e-9));
  for (const auto& chain : cut.cut.chains) {
    Vec2 s = chain.front().start();
    Vec2 e = chain.back().end();
    CHECK(rim_distance(V, s) < 1e-7);
    CHECK(rim_distance(V, e) < 1e-7);
    CHECK(std::abs(chain.front().tangent_at(0).dot(rim_tangent(V, s))) < 1e-6);
    CHECK(std::abs(chain.back().tangent_at(1).dot(rim_tangent(V, e))) < 1e-6);
  }
}

// Orthogonal-circle geometry on the unit disc, parametrized by the aperture
// half-angle psi: the cutting circle has radius tan(psi) and meets the rim at
// angles +-psi, so both the cut length and the cut-off area are elementary.
double psi_area(double psi) {
  return psi + std::pow(std::tan(psi), 2) * (kPi / 2 - psi) - std::tan(psi);
}
double psi_length(double psi) { return 2 * std::tan(psi) * (kPi / 2 - psi); }

}  // namespace

TEST_CASE("the half-area cut of a disc is a diameter") {
  Domain disc = Disc{1.0};
  DidoCut cut = dido_cut(disc, kPi / 2);
  CHECK(cut.family == CutFamily::diameter);
  CHECK(cut.length == doctest::Approx(2.0));
  check_cut_shape(disc, cut);
  CHECK(g_of_a(disc, kPi / 2) == doctest::Approx(2.0));
}

TEST_CASE("disc cuts match the orthogonal-circle closed form") {
  Domain disc = Disc{1.0};
  for (double psi : {0.3, kPi / 4, 1.0, 1.3}) {
    double a = psi_area(psi);
    CHECK(g_of_a(disc, a) == doctest::Approx(psi_length(psi)).epsilon(1e-7));
    DidoCut cut = dido_cut(disc, a);
    CHECK(cut.family == CutFamily::orthogonal_circle);
    check_cut_shape(disc, cut);
  }
  // The complementary side reports the same length with the big region kept.
  double a = psi_area(0.8);
  DidoCut big = dido_cut(disc, kPi - a);
  CHECK(big.length == doctest::Approx(psi_length(0.8)).epsilon(1e-7));
  check_cut_shape(disc, big);
}

TEST_CASE("g vanishes at the ends and rejects areas outside the domain") {
  Domain disc = Disc{1.0};
  CHECK(g_of_a(disc, 0.0) == 0.0);
  CHECK(g_of_a(disc, kPi) == 0.0);
  CHECK_THROWS_AS(dido_cut(disc, 0.0), Error);
  CHECK_THROWS_AS(dido_cut(disc, -0.25), Error);
  CHECK_THROWS_AS(dido_cut(disc, 4.0), Error);
}

TEST_CASE("wedge cuts are centered sectors reported by arc length") {
  Wedge w{kPi / 6, 2.0};
  Domain V{w};
  double s = 1.2;
  double a = w.alpha * s * s;
  CHECK(g_of_a(V, a) == doctest::Approx(2 * w.alpha * s).epsilon(1e-12));
  DidoCut cut = dido_cut(V, a);
  CHECK(cut.family == CutFamily::corner_sector);
  check_cut_shape(V, cut);
  CHECK((cut.cut.chains[0][0].center - Vec2(0, 0)).norm() < 1e-12);
  CHECK(cut.cut.chains[0][0].radius == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("small triangle cuts follow the corner-sector radius convention") {
  Domain tri = unit_triangle();
  // A sector of radius s at a pi/3 corner encloses pi s^2 / 6; the reported
  // size is the radius itself, not the arc length.
  double s = 0.1;
  CHECK(g_of_a(tri, kPi * s * s / 6) == doctest::Approx(s).epsilon(1e-10));
  DidoCut cut = dido_cut(tri, kPi * s * s / 6);
  CHECK(cut.family == CutFamily::corner_sector);
  CHECK(cut.anchor >= 0);
  CHECK(cut.anchor < 3);
  check_cut_shape(tri, cut);
}

TEST_CASE("triangle cut sizes are symmetric under complementation") {
  Domain tri = unit_triangle();
  double A = domain_area(tri);
  for (double f : {0.1, 0.15, 0.3, 0.47})
    CHECK(g_of_a(tri, f * A) == doctest::Approx(g_of_a(tri, (1 - f) * A)).epsilon(1e-10));
}

TEST_CASE("bottleneck cut size of the unit disc is its diameter") {
  CHECK(kappa(Disc{1.0}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(kappa(Disc{2.5}) == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(K_upper(Disc{1.0}) == doctest::Approx(2.0));
}

TEST_CASE("triangle invariants: corner bottleneck against the height sweep") {
  Domain tri = unit_triangle();
  double k = kappa(tri);
  double K = K_upper(tri);
  CHECK(k == doctest::Approx(std::sqrt(3 * kSqrt3 / (4 * kPi))).epsilon(1e-9));
  CHECK(K == doctest::Approx(kSqrt3 / 2).epsilon(1e-6));
  CHECK(k < K);
}

TEST_CASE("invariants scale linearly with the domain") {
  ConvexPolygon tri = unit_triangle();
  ConvexPolygon big;
  for (const auto& v : tri.verts) big.verts.push_back(2.0 * v);
  CHECK(kappa(Domain{big}) == doctest::Approx(2 * kappa(Domain{tri})).epsilon(1e-8));
}

TEST_CASE("square invariants come from the right-angle corner family") {
  ConvexPolygon sq;
  sq.verts = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  Domain V{sq};
  // Quarter-circle sectors of radius s cut off pi s^2 / 4.
  double s = 0.4;
  CHECK(g_of_a(V, kPi * s * s / 4) == doctest::Approx(s).epsilon(1e-10));
  CHECK(kappa(V) == doctest::Approx(2 * std::sqrt(0.5 / kPi)).epsilon(1e-8));
  CHECK(K_upper(V) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("verdicts compare the budget against both invariants") {
  Domain tri = unit_triangle();
  FeasibilityReport base = eradication_verdict(tri, 1.0);
  CHECK(base.verdict == Verdict::Eradicable);
  CHECK(eradication_verdict(tri, 0.9).verdict == Verdict::Eradicable);
  CHECK(eradication_verdict(tri, 0.7).verdict == Verdict::Unknown);
  CHECK(eradication_verdict(tri, 0.6).verdict == Verdict::NotEradicable);

  // Margin is the signed distance to the nearer threshold.
  FeasibilityReport hi = eradication_verdict(tri, 0.9);
  CHECK(hi.margin == doctest::Approx(0.9 - base.K_upper).epsilon(1e-9));
  FeasibilityReport lo = eradication_verdict(tri, 0.6);
  CHECK(lo.margin == doctest::Approx(0.6 - base.kappa).epsilon(1e-9));
}

TEST_CASE("verdicts flip exactly at the computed thresholds") {
  Domain tri = unit_triangle();
  FeasibilityReport base = eradication_verdict(tri, 1.0);
  CHECK(eradication_verdict(tri, base.K_upper + 1e-9).verdict == Verdict::Eradicable);
  CHECK(eradication_verdict(tri, base.K_upper - 1e-9).verdict == Verdict::Unknown);
  CHECK(eradication_verdict(tri, base.kappa + 1e-9).verdict == Verdict::Unknown);
  CHECK(eradication_verdict(tri, base.kappa - 1e-9).verdict == Verdict::NotEradicable);

  // Both disc thresholds coincide at the diameter, so Unknown degenerates to
  // the single point M = 2R.
  Domain disc = Disc{1.0};
  FeasibilityReport at = eradication_verdict(disc, 2.0);
  CHECK(at.verdict == Verdict::Unknown);
  CHECK(at.margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eradication_verdict(disc, 2.0 + 1e-9).verdict == Verdict::Eradicable);
  CHECK(eradication_verdict(disc, 2.0 - 1e-9).verdict == Verdict::NotEradicable);
}
