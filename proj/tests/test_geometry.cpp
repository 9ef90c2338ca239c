#include <doctest.h>

#include <cmath>

#include "movset/geometry.hpp"

using namespace movset;
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

}  // namespace

TEST_CASE("segment pieces report length, tangent, curvature, circulation") {
  CircArc s = make_segment(Vec2(1, 2), Vec2(4, 6), ArcKind::controlled, 0.5);
  CHECK(s.is_segment());
  CHECK(s.length() == doctest::Approx(5.0));
  CHECK(s.point_at(0.5).x() == doctest::Approx(2.5));
  CHECK(s.point_at(0.5).y() == doctest::Approx(4.0));
  CHECK(s.tangent_at(0.3).x() == doctest::Approx(0.6));
  CHECK(s.tangent_at(0.3).y() == doctest::Approx(0.8));
  CHECK(s.signed_curvature() == 0.0);
  // x dy - y dx is constant along a line through two points: cross(p0, p1).
  CHECK(s.circulation() == doctest::Approx(1.0 * 6 - 2.0 * 4));
  CHECK(s.beta0 == 0.5);
  CHECK(s.beta1 == 0.5);
}

TEST_CASE("arc pieces respect orientation in tangent and signed curvature") {
  CircArc ccw = make_arc(Vec2(0, 0), 2.0, 0.0, kPi / 2, ArcKind::free_arc, -1);
  CHECK(ccw.length() == doctest::Approx(kPi));
  CHECK(ccw.start().x() == doctest::Approx(2.0));
  CHECK(ccw.end().y() == doctest::Approx(2.0));
  CHECK(ccw.tangent_at(0.0).x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ccw.tangent_at(0.0).y() == doctest::Approx(1.0));
  CHECK(ccw.signed_curvature() == doctest::Approx(0.5));

  CircArc cw = make_arc(Vec2(0, 0), 2.0, kPi / 2, 0.0, ArcKind::controlled, 0.1);
  CHECK(cw.signed_curvature() == doctest::Approx(-0.5));
  CHECK(cw.tangent_at(1.0).y() == doctest::Approx(-1.0));
  // Reversal swaps endpoints and flips the circulation sign.
  CircArc back = reversed(ccw);
  CHECK((back.start() - ccw.end()).norm() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(back.circulation() == doctest::Approx(-ccw.circulation()));
}

TEST_CASE("full-circle circulation equals twice the enclosed area for any center") {
  CircArc c0 = make_arc(Vec2(0, 0), 1.5, 0, 2 * kPi, ArcKind::controlled, 0);
  CHECK(c0.circulation() == doctest::Approx(2 * kPi * 1.5 * 1.5));
  CircArc c1 = make_arc(Vec2(3, -2), 1.5, 0.7, 0.7 + 2 * kPi, ArcKind::controlled, 0);
  CHECK(c1.circulation() == doctest::Approx(2 * kPi * 1.5 * 1.5));
}

TEST_CASE("make_arc rejects nonpositive radii and spans beyond a full turn") {
  CHECK(throws_with(Err::OutOfRange,
                    [] { make_arc(Vec2(0, 0), 0.0, 0, 1, ArcKind::controlled, 0); }));
  CHECK(throws_with(Err::OutOfRange,
                    [] { make_arc(Vec2(0, 0), 1.0, 0, 7.0, ArcKind::controlled, 0); }));
}

TEST_CASE("relative_perimeter sums chain lengths only") {
  Boundary b = single_chain(
      {make_segment(Vec2(0.25, kSqrt3 / 4), Vec2(0.75, kSqrt3 / 4), ArcKind::controlled, 0)});
  CHECK(relative_perimeter(b) == doctest::Approx(0.5));

  Boundary two;
  two.chains.push_back({make_arc(Vec2(0, 0), 2.0, 0, kPi / 6, ArcKind::controlled, 0)});
  two.chains.push_back({make_arc(Vec2(0, 0), 2.0, kPi, kPi + kPi / 6, ArcKind::controlled, 0)});
  CHECK(relative_perimeter(two) == doctest::Approx(2 * (2.0 * kPi / 6)));
  CHECK(relative_perimeter(Boundary{}) == 0.0);
}

TEST_CASE("domain area and diameter for the supported shapes") {
  CHECK(domain_area(Disc{1.5}) == doctest::Approx(kPi * 2.25));
  CHECK(domain_diameter(Disc{1.5}) == doctest::Approx(3.0));

  CHECK(domain_area(Wedge{kPi / 4, 2.0}) == doctest::Approx(kPi));
  // Lid corners are the farthest pair once 2 sin(alpha) > 1.
  CHECK(domain_diameter(Wedge{kPi / 4, 2.0}) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(domain_diameter(Wedge{kPi / 12, 1.0}) == doctest::Approx(1.0));

  CHECK(domain_area(unit_triangle()) == doctest::Approx(kSqrt3 / 4));
  CHECK(domain_diameter(unit_triangle()) == doctest::Approx(1.0));

  SymmetricCap cap;
  cap.g = [](double x) { return 1.0 - 0.5 * x * x; };
  cap.dg = [](double x) { return -x; };
  cap.ddg = [](double) { return -1.0; };
  cap.half_width = 1.0;
  CHECK(domain_area(Domain{cap}) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("signed_distance is negative inside and positive outside") {
  Domain disc = Disc{2.0};
  CHECK(signed_distance(disc, Vec2(0, 0)) == doctest::Approx(-2.0));
  CHECK(signed_distance(disc, Vec2(3, 0)) == doctest::Approx(1.0));
  CHECK(domain_contains(disc, Vec2(0, 2)));
  CHECK(!domain_contains(disc, Vec2(0, 2.1)));

  Domain tri = unit_triangle();
  CHECK(signed_distance(tri, Vec2(0.5, 0.2)) < 0);
  CHECK(signed_distance(tri, Vec2(0.5, -0.1)) == doctest::Approx(0.1));
  CHECK(signed_distance(tri, Vec2(0.5, 0)) == doctest::Approx(0.0).epsilon(1e-14));

  Domain wedge = Wedge{kPi / 6, 1.0};
  CHECK(domain_contains(wedge, Vec2(0.5, 0.2)));
  CHECK(!domain_contains(wedge, Vec2(0.5, 0.4)));
  CHECK(!domain_contains(wedge, Vec2(1.2, 0)));
}

TEST_CASE("rim circulation recovers twice the domain area") {
  for (const Domain& V :
       {Domain{Disc{1.3}}, Domain{Wedge{kPi / 5, 2.0}}, Domain{unit_triangle()}}) {
    double circ = 0;
    const auto rim = rim_pieces(V);
    for (const auto& a : rim) circ += a.circulation();
    CHECK(circ == doctest::Approx(2 * domain_area(V)));
    // The loop closes head to tail.
    for (std::size_t i = 0; i < rim.size(); ++i)
      CHECK((rim[i].end() - rim[(i + 1) % rim.size()].start()).norm() ==
            doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("rim_tangent and rim_locate agree on simple rims") {
  Domain disc = Disc{1.0};
  CHECK(rim_tangent(disc, Vec2(1, 0)).x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rim_tangent(disc, Vec2(1, 0)).y() == doctest::Approx(1.0));
  double d = 0;
  RimPoint rp = rim_locate(disc, Vec2(2, 0), &d);
  CHECK(d == doctest::Approx(1.0));
  CHECK((rim_pieces(disc)[rp.piece].point_at(rp.s) - Vec2(1, 0)).norm() ==
        doctest::Approx(0.0).epsilon(1e-9));

  Domain tri = unit_triangle();
  CHECK(rim_tangent(tri, Vec2(0.5, 0)).x() == doctest::Approx(1.0));
  CHECK(rim_distance(tri, Vec2(0.5, 0.1)) == doctest::Approx(0.1));
}

TEST_CASE("rim_walk_circulation integrates x dy - y dx along the ccw walk") {
  Domain disc = Disc{1.0};
  // Angle 3pi/2 to pi/2 through the eastern half: quarter+quarter of a unit
  // circle centered at the origin contributes r^2 * pi.
  CHECK(rim_walk_circulation(disc, RimPoint{0, 0.75}, RimPoint{0, 0.25}) ==
        doctest::Approx(kPi));
  CHECK(rim_walk_circulation(disc, RimPoint{0, 0.25}, RimPoint{0, 0.25}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("region_area with an empty boundary is the whole domain") {
  CHECK(region_area(Disc{1.0}, Boundary{}) == doctest::Approx(kPi));
  CHECK(point_in_region(Disc{1.0}, Boundary{}, Vec2(0.3, 0.3)));
  CHECK(!point_in_region(Disc{1.0}, Boundary{}, Vec2(1.2, 0)));
}

TEST_CASE("a diameter chord carves the eastern half-disc") {
  Domain disc = Disc{1.0};
  Boundary b = single_chain(
      {make_segment(Vec2(0, 1), Vec2(0, -1), ArcKind::controlled, 0.2)});
  validate_boundary(disc, b);
  CHECK(region_area(disc, b) == doctest::Approx(kPi / 2));
  CHECK(point_in_region(disc, b, Vec2(0.5, 0)));
  CHECK(!point_in_region(disc, b, Vec2(-0.5, 0)));
  CHECK(distance_to_region_boundary(disc, b, Vec2(0.4, 0)) == doctest::Approx(0.4));
}

TEST_CASE("an off-center chord carves a circular cap") {
  Domain disc = Disc{1.0};
  Boundary b = single_chain(
      {make_segment(Vec2(0.5, kSqrt3 / 2), Vec2(0.5, -kSqrt3 / 2), ArcKind::controlled, 0)});
  validate_boundary(disc, b);
  CHECK(region_area(disc, b) == doctest::Approx(kPi / 3 - kSqrt3 / 4));
}

TEST_CASE("a perpendicular arc carves the lens between two unit circles") {
  // Second circle centered at (sqrt2, 0): the circles cross at right angles,
  // so the lens area has the closed form pi/2 - 1.
  Domain disc = Disc{1.0};
  const double s2 = std::sqrt(2.0);
  Boundary b = single_chain(
      {make_arc(Vec2(s2, 0), 1.0, 3 * kPi / 4, 5 * kPi / 4, ArcKind::controlled, 0)});
  validate_boundary(disc, b);
  CHECK(region_area(disc, b) == doctest::Approx(kPi / 2 - 1.0));

  // Membership decisions stay exact arbitrarily close to the arc apex.
  const double apex = s2 - 1.0;
  CHECK(point_in_region(disc, b, Vec2(apex + 1e-9, 0)));
  CHECK(!point_in_region(disc, b, Vec2(apex - 1e-9, 0)));
  CHECK(distance_to_region_boundary(disc, b, Vec2(apex + 1e-9, 0)) ==
        doctest::Approx(1e-9).epsilon(1e-3));
}

TEST_CASE("a clockwise arc in a wedge keeps the outer annular sector") {
  Domain w = Wedge{kPi / 4, 2.0};
  Boundary b = single_chain(
      {make_arc(Vec2(0, 0), 1.0, kPi / 4, -kPi / 4, ArcKind::free_arc, -1)});
  validate_boundary(w, b);
  CHECK(region_area(w, b) == doctest::Approx(3 * kPi / 4));
  CHECK(point_in_region(w, b, Vec2(1.5, 0)));
  CHECK(!point_in_region(w, b, Vec2(0.5, 0)));
}

TEST_CASE("the triangle median splits the area in half") {
  Domain tri = unit_triangle();
  Boundary b = single_chain(
      {make_segment(Vec2(0.5, kSqrt3 / 2), Vec2(0.5, 0), ArcKind::controlled, 0)});
  validate_boundary(tri, b);
  CHECK(region_area(tri, b) == doctest::Approx(kSqrt3 / 8));
  CHECK(region_area(tri, reversed(b)) == doctest::Approx(kSqrt3 / 8));
  CHECK(point_in_region(tri, b, Vec2(0.6, 0.1)));
  CHECK(!point_in_region(tri, b, Vec2(0.4, 0.1)));
}

TEST_CASE("validate_boundary rejects broken chains and interior endpoints") {
  Domain disc = Disc{1.0};
  Boundary ok = single_chain(
      {make_segment(Vec2(0, 1), Vec2(0, 0), ArcKind::controlled, 0),
       make_segment(Vec2(0, 0), Vec2(0, -1), ArcKind::controlled, 0)});
  CHECK_NOTHROW(validate_boundary(disc, ok));

  Boundary gap = single_chain(
      {make_segment(Vec2(0, 1), Vec2(0, 0.2), ArcKind::controlled, 0),
       make_segment(Vec2(0, 0.1), Vec2(0, -1), ArcKind::controlled, 0)});
  CHECK(throws_with(Err::InvalidBoundary, [&] { validate_boundary(disc, gap); }));

  Boundary hanging = single_chain(
      {make_segment(Vec2(0, 0.5), Vec2(0, -0.5), ArcKind::controlled, 0)});
  CHECK(throws_with(Err::InvalidBoundary, [&] { validate_boundary(disc, hanging); }));

  Boundary outside = single_chain(
      {make_arc(Vec2(2, 0), 2.4, kPi - 0.3, kPi + 0.3, ArcKind::controlled, 0)});
  CHECK(throws_with(Err::InvalidBoundary, [&] { validate_boundary(disc, outside); }));
}

TEST_CASE("perpendicular arcs across a corner of two lines center at the vertex") {
  // Circles crossing both lines at right angles must center where the lines
  // meet, which pins sigma and the radius in closed form.
  const double m1 = 0.4, m2 = -0.25;
  Graph g1{[&](double t) { return m1 * t; }, [&](double) { return m1; }};
  Graph g2{[&](double t) { return m2 * t; }, [&](double) { return m2; }};
  const double x = 0.2;
  PerpArc pa = perp_arc_corner(g1, g2, x);
  const double sig = -x * std::sqrt((1 + m1 * m1) / (1 + m2 * m2));
  CHECK(pa.sigma == doctest::Approx(sig).epsilon(1e-8));
  CHECK(pa.radius == doctest::Approx(x * std::sqrt(1 + m1 * m1)).epsilon(1e-8));
  CHECK(pa.arc.center.norm() == doctest::Approx(0.0).epsilon(1e-7));
  CHECK((pa.touch1 - Vec2(x, m1 * x)).norm() == doctest::Approx(0.0).epsilon(1e-8));
  CHECK((pa.arc.end() - pa.touch1).norm() == doctest::Approx(0.0).epsilon(1e-8));
  CHECK((pa.arc.start() - pa.touch2).norm() == doctest::Approx(0.0).epsilon(1e-8));

  // Radius parallel to the graph tangent at both crossings.
  auto cross2 = [](const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); };
  Vec2 r1 = (pa.touch1 - pa.arc.center).normalized();
  Vec2 t1 = Vec2(1, m1).normalized();
  CHECK(std::abs(cross2(r1, t1)) < 1e-7);
  Vec2 r2 = (pa.touch2 - pa.arc.center).normalized();
  Vec2 t2 = Vec2(1, m2).normalized();
  CHECK(std::abs(cross2(r2, t2)) < 1e-7);
}

TEST_CASE("a mirror-symmetric corner matches abscissae exactly") {
  const double m = 0.7;
  Graph g1{[&](double t) { return m * t; }, [&](double) { return m; }};
  Graph g2{[&](double t) { return -m * t; }, [&](double) { return -m; }};
  for (double x : {0.3, 0.05, 0.01})
    CHECK(perp_arc_corner(g1, g2, x).sigma == doctest::Approx(-x).epsilon(1e-8));
}

TEST_CASE("a quadratic graph perturbation shifts sigma at second order") {
  Graph g1{[](double t) { return t + t * t; }, [](double t) { return 1 + 2 * t; }};
  Graph g2{[](double t) { return -t; }, [](double) { return -1.0; }};
  for (double x : {1e-2, 1e-3}) {
    double sig = perp_arc_corner(g1, g2, x).sigma;
    CHECK(std::abs(sig + x) < 5 * x * x);
  }
  // Central difference of sigma(x) near 0 approaches -1.
  const double x0 = 1e-3, h = 1e-4;
  double slope = (perp_arc_corner(g1, g2, x0 + h).sigma -
                  perp_arc_corner(g1, g2, x0 - h).sigma) /
                 (2 * h);
  CHECK(slope == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("perpendicular arcs on a smooth curvature maximum") {
  // f(t) = t^2/2 has the perpendicular circle centered at (0, -x^2/2) with
  // radius x sqrt(1+x^2), both in closed form.
  SmoothGraph g;
  g.f = [](double t) { return 0.5 * t * t; };
  g.df = [](double t) { return t; };
  g.ddf = [](double) { return 1.0; };
  const double x = 0.1;
  PerpArc pa = perp_arc_smooth(g, x);
  CHECK(pa.sigma == doctest::Approx(-x).epsilon(1e-8));
  CHECK(pa.radius == doctest::Approx(x * std::sqrt(1 + x * x)).epsilon(1e-8));
  CHECK(pa.arc.center.x() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pa.arc.center.y() == doctest::Approx(-0.5 * x * x).epsilon(1e-7));
  // The arc from touch2 to touch1 bulges over the apex of the graph.
  Vec2 top = pa.arc.point_at(0.5);
  CHECK(top.x() == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(top.y() == doctest::Approx(-0.5 * x * x + pa.radius).epsilon(1e-7));

  SmoothGraph quartic;
  quartic.f = [](double t) { return 0.5 * t * t - std::pow(t, 4); };
  quartic.df = [](double t) { return t - 4 * std::pow(t, 3); };
  quartic.ddf = [](double t) { return 1 - 12 * t * t; };
  CHECK(perp_arc_smooth(quartic, 0.05).sigma == doctest::Approx(-0.05).epsilon(1e-8));

  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 6; ++k) {
    double r = perp_arc_smooth(g, 0.1 * std::pow(2.0, -k)).radius;
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 2e-3);
}

TEST_CASE("perp_arc_smooth requires a strict curvature maximum") {
  SmoothGraph flat;
  flat.f = [](double t) { return 0.5 * t * t + std::pow(t, 4); };
  flat.df = [](double t) { return t + 4 * std::pow(t, 3); };
  flat.ddf = [](double t) { return 1 + 12 * t * t; };
  CHECK(throws_with(Err::NotAMaximum, [&] { perp_arc_smooth(flat, 0.05); }));
}
