#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "movset/errors.hpp"

namespace movset::num {

inline constexpr double kPi = 3.14159265358979323846;

// Area of a circular segment of half-angle theta (chord to arc), radius r:
// (r^2/2)(2*theta - sin(2*theta)).  Series form below 1e-3 rad keeps accuracy
// when r is huge and theta tiny (the product r^2*theta^3 stays O(1)).
inline double circ_segment_area(double r, double theta) {
  if (theta < 0) fail(Err::OutOfRange, "circ_segment_area: negative half-angle");
  double u = 2.0 * theta;
  if (u < 1e-3) {
    double u3 = u * u * u;
    return 0.5 * r * r * (u3 / 6.0 - u3 * u * u / 120.0);
  }
  return 0.5 * r * r * (u - std::sin(u));
}

// Bisection on a bracketing interval; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double xtol, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) fail(Err::NoBracket, "bisect: endpoints have equal sign");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Newton with bisection fallback; keeps iterates inside [lo, hi].
inline double newton_safe(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double x0, double lo,
                          double hi, double xtol, int max_iter = 100) {
  double x = x0;
  for (int i = 0; i < max_iter; ++i) {
    double fx = f(x);
    double d = df(x);
    double step = (d != 0) ? fx / d : 2 * (hi - lo);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) {
      return bisect(f, lo, hi, xtol);
    }
    if (std::abs(xn - x) < xtol) return xn;
    x = xn;
  }
  return bisect(f, lo, hi, xtol);
}

// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double xtol) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Adaptive Simpson quadrature with absolute+relative tolerance.
namespace detail {
inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
inline double adapt(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 60) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = detail::simpson(a, fa, b, fb, fm);
  double scale = std::max({std::abs(whole), std::abs(b - a), 1.0});
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol * scale, max_depth);
}

// One classical RK4 step for y' = f(t, y) with small fixed-size state.
template <typename State, typename Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double dt) {
  State k1 = f(t, y);
  State k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
  State k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
  State k4 = f(t + dt, y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Wrap an angle into [0, 2*pi).
inline double wrap_2pi(double a) {
  double t = std::fmod(a, 2 * kPi);
  return t < 0 ? t + 2 * kPi : t;
}

}  // namespace movset::num
