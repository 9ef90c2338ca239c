#include "movset/corner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "movset/errors.hpp"
#include "movset/numerics.hpp"

namespace movset::corner {

double sigma_of_beta(double beta) {
  if (!(beta > 0) || beta > num::kPi / 2) fail(Err::OutOfRange, "beta must lie in (0, pi/2]");
  if (beta >= num::kPi / 2 * (1 - 1e-15)) return std::numeric_limits<double>::infinity();
  if (beta < 1e-3) {
    const double b2 = beta * beta;
    return 1 + 0.4 * b2 + (86.0 / 525.0) * b2 * b2;
  }
  const double sb = std::sin(beta), cb = std::cos(beta);
  return (beta - sb * cb) / (2 * cb * (sb - beta * cb));
}

namespace {

double safe_sin(double a) {
  const double s = std::sin(a);
  if (!(a > 0) || !(a < num::kPi) || std::abs(s) < 1e-300)
    fail(Err::AngleDegeneracy, "junction angle left (0, pi)");
  return s;
}

}  // namespace

CornerRhs corner_rhs(double x, double phi, double dphi, double ddphi, double t1, double t2,
                     double beta, double M) {
  CornerRhs out;
  out.theta = std::atan(dphi);
  const double th = out.theta;
  if (std::abs(beta - th) < 1e-10 || std::abs(beta + th) < 1e-10)
    fail(Err::AngleDegeneracy, "interface slope reaches the corner angle");
  const double s1 = safe_sin(beta - th);  // lower junction
  const double s2 = safe_sin(beta + th);  // upper junction
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double c1 = std::cos(beta - th), c2 = std::cos(beta + th);
  const double sq2 = 1 + dphi * dphi;
  const double sq = std::sqrt(sq2);
  out.omega = ddphi / (sq2 * sq);

  const double u1 = x * cb + phi * sb;  // distances of the interface point
  const double u2 = x * cb - phi * sb;  // from the two corner edges
  out.r1 = u1 / s1 - t1;
  out.r2 = u2 / s2 + t2;

  const double brace2 = (cb - dphi * sb) - u2 * (c2 / s2) * (ddphi / sq2);
  const double brace1 = (cb + dphi * sb) + u1 * (c1 / s1) * (ddphi / sq2);

  out.T2 = (out.r2 / M) *
           ((sq - ddphi * out.r2 / sq2) -
            (beta + th) * ((cb - dphi * sb) / s2 - u2 * c2 * ddphi / (s2 * s2 * sq2)));
  out.T1 = -(out.r1 / M) *
           ((sq + ddphi * out.r1 / sq2) -
            (beta - th) * ((cb + dphi * sb) / s1 + u1 * c1 * ddphi / (s1 * s1 * sq2)));

  out.F = -(ddphi / sq2) * (out.r1 + out.r2) - ((beta + th) / s2) * brace2 +
          ((beta - th) / s1) * brace1;

  const double w = out.omega;
  out.G = M * w *
              ((t1 * w / (1 + t1 * w)) * out.T1 - (t2 * w / (1 + t2 * w)) * out.T2) +
          (ddphi / sq2) * (out.r1 + out.r2) + (ddphi / sq2) * w * (out.r1 * out.r1 - out.r2 * out.r2) -
          ((beta + th) / s2) * brace2 * w * out.r2 - ((beta - th) / s1) * brace1 * w * out.r1;
  out.H = out.G - out.F;
  out.noise_scale = std::abs((ddphi / sq2) * (out.r1 + out.r2)) +
                    std::abs(((beta + th) / s2) * brace2) * (1 + std::abs(w * out.r2)) +
                    std::abs(((beta - th) / s1) * brace1) * (1 + std::abs(w * out.r1)) +
                    std::abs(M * w * out.T1) + std::abs(M * w * out.T2) + 1e-300;
  return out;
}

double solve_upsilon(double x, double phi, double dphi, double t1, double t2, double beta,
                     double M, double upsilon_guess) {
  auto Hof = [&](double u) { return corner_rhs(x, phi, dphi, u, t1, t2, beta, M).H; };
  const double scale = std::max({1.0, std::abs(upsilon_guess), std::abs(dphi) / std::max(x, 1e-300)});

  double u = upsilon_guess;
  for (int it = 0; it < 60; ++it) {
    CornerRhs r;
    try {
      r = corner_rhs(x, phi, dphi, u, t1, t2, beta, M);
    } catch (const Error&) {
      break;
    }
    if (std::abs(r.H) < 1e-15 * r.noise_scale) return u;
    // dH/dU ~ x near the corner while H carries O(1) roundoff, so the
    // difference step has to be much larger than noise/x.
    const double du =
        std::max(1e-6 * (std::abs(u) + std::abs(upsilon_guess)), 1e-13 / std::max(x, 1e-12));
    double hp, hm;
    try {
      hp = Hof(u + du);
      hm = Hof(u - du);
    } catch (const Error&) {
      break;
    }
    const double dh = (hp - hm) / (2 * du);
    if (dh == 0 || !std::isfinite(dh)) break;
    const double step = r.H / dh;
    if (!std::isfinite(step)) break;
    u -= num::clamp(step, -10 * scale, 10 * scale);
    if (std::abs(step) < 1e-15 * (std::abs(u) + std::abs(upsilon_guess) + 1e-300)) {
      try {
        const CornerRhs r2 = corner_rhs(x, phi, dphi, u, t1, t2, beta, M);
        if (std::abs(r2.H) < 1e-13 * r2.noise_scale) return u;
      } catch (const Error&) {
      }
      break;
    }
  }

  // Bisection fallback: bracket around the guess, then a sign scan.
  auto Hsafe = [&](double v, bool& ok) {
    try {
      ok = true;
      return Hof(v);
    } catch (const Error&) {
      ok = false;
      return 0.0;
    }
  };
  const double g = upsilon_guess != 0 ? upsilon_guess : scale;
  std::vector<double> probes;
  for (double f = 0.1; f <= 10.0; f *= 1.25) probes.push_back(g * f);
  for (double f = 0.1; f <= 10.0; f *= 1.25) probes.push_back(-g * f);
  probes.push_back(0);
  std::sort(probes.begin(), probes.end());
  double prev_v = 0, prev_h = 0;
  bool have_prev = false;
  for (double v : probes) {
    bool ok = false;
    const double h = Hsafe(v, ok);
    if (!ok) {
      have_prev = false;
      continue;
    }
    if (have_prev && prev_h * h <= 0 && prev_v != v) {
      double lo = prev_v, hi = v, hlo = prev_h;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        bool mok = false;
        const double hm = Hsafe(mid, mok);
        if (!mok) break;
        if (hlo * hm <= 0) {
          hi = mid;
        } else {
          lo = mid;
          hlo = hm;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_v = v;
    prev_h = h;
    have_prev = true;
  }
  fail(Err::NoConvergence, "no curvature root at this station");
}

namespace {

// Cumulative trapezoid with a linear head on [0, x0].
std::vector<double> cumtrap_linear_head(const std::vector<double>& x,
                                        const std::vector<double>& f) {
  std::vector<double> F(x.size());
  F[0] = 0.5 * f[0] * x[0];
  for (std::size_t j = 1; j < x.size(); ++j)
    F[j] = F[j - 1] + 0.5 * (f[j] + f[j - 1]) * (x[j] - x[j - 1]);
  return F;
}

}  // namespace

FreeInterfaceState picard_step(const FreeInterfaceState& s, const CornerParams& p) {
  const std::size_t n = s.x.size();
  FreeInterfaceState out;
  out.x = s.x;
  out.phi.resize(n);
  out.dphi.resize(n);
  out.t1.resize(n);
  out.t2.resize(n);
  out.upsilon.resize(n);
  out.r1.resize(n);
  out.r2.resize(n);
  out.theta1.resize(n);
  out.theta2.resize(n);

  const double sigma = p.sigma;
  std::vector<double> T1(n), T2(n), K(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double xg = s.x[j];
    const double guess = s.dphi[j] != 0 ? sigma * s.dphi[j] / xg
                                        : (sigma + 1) * sigma * p.c * std::pow(xg, sigma - 1);
    const double u = solve_upsilon(xg, s.phi[j], s.dphi[j], s.t1[j], s.t2[j], p.beta, p.M,
                                   guess);
    const CornerRhs r = corner_rhs(xg, s.phi[j], s.dphi[j], u, s.t1[j], s.t2[j], p.beta, p.M);
    out.upsilon[j] = u;
    out.r1[j] = r.r1;
    out.r2[j] = r.r2;
    const double th = std::atan(s.dphi[j]);
    out.theta1[j] = p.beta - th;
    out.theta2[j] = p.beta + th;
    T1[j] = r.T1;
    T2[j] = r.T2;
    K[j] = xg * u - sigma * s.dphi[j];
  }

  out.t1 = cumtrap_linear_head(s.x, T1);
  out.t2 = cumtrap_linear_head(s.x, T2);

  // dphi = x^sigma ((sigma+1) c + I(x)), I(x) = integral of y^(-sigma-1) K(y).
  // The head models K ~ k0 y^(sigma+eps) with eps = min(1, sigma) = 1.
  std::vector<double> integrand(n);
  for (std::size_t j = 0; j < n; ++j)
    integrand[j] = K[j] * std::pow(s.x[j], -sigma - 1);
  double k0 = 0;
  for (int j = 0; j < 3 && j < static_cast<int>(n); ++j)
    k0 += K[j] / std::pow(s.x[j], sigma + 1) / 3.0;
  double I = k0 * s.x[0];  // head integral: k0 * x0^eps / eps with eps = 1
  out.dphi[0] = std::pow(s.x[0], sigma) * ((sigma + 1) * p.c + I);
  for (std::size_t j = 1; j < n; ++j) {
    I += 0.5 * (integrand[j] + integrand[j - 1]) * (s.x[j] - s.x[j - 1]);
    out.dphi[j] = std::pow(s.x[j], sigma) * ((sigma + 1) * p.c + I);
  }

  // phi from dphi, with the pure-power head phi(x0) = dphi(x0) x0/(sigma+1).
  out.phi[0] = out.dphi[0] * s.x[0] / (sigma + 1);
  for (std::size_t j = 1; j < n; ++j)
    out.phi[j] =
        out.phi[j - 1] + 0.5 * (out.dphi[j] + out.dphi[j - 1]) * (s.x[j] - s.x[j - 1]);

  for (std::size_t j = 0; j < n; ++j) {
    const double xg = s.x[j];
    const double x2 = xg * xg;
    if (std::abs(out.t1[j]) > p.C0 * x2 || std::abs(out.t2[j]) > p.C0 * x2 ||
        std::abs(out.phi[j]) > p.C0 * std::pow(xg, sigma + 1) ||
        std::abs(out.dphi[j]) > p.C0 * std::pow(xg, sigma))
      fail(Err::LeftDomain, "iterate left the a-priori bounds");
  }
  return out;
}

CornerSolution corner_interface(double beta, double c, double M, double x_dagger, int nodes) {
  if (!(M > 0)) fail(Err::OutOfRange, "effort must be positive");
  if (nodes < 8) fail(Err::OutOfRange, "grid needs at least 8 nodes");
  CornerSolution sol;
  sol.params.beta = beta;
  sol.params.M = M;
  sol.params.c = c;
  sol.params.sigma = sigma_of_beta(beta);
  if (!std::isfinite(sol.params.sigma))
    fail(Err::OutOfRange, "flat corner: the similarity exponent diverges");
  sol.params.C0 = std::max(1.0, 3 * (sol.params.sigma + 1) * std::abs(c));

  const int n = nodes;
  double xd = x_dagger;
  while (xd > 1e-8) {
    FreeInterfaceState st;
    st.x.resize(n);
    for (int j = 0; j < n; ++j)
      st.x[j] = xd * std::pow(1e-7, (n - 1.0 - j) / (n - 1.0));
    st.phi.assign(n, 0.0);
    st.dphi.assign(n, 0.0);
    st.t1.assign(n, 0.0);
    st.t2.assign(n, 0.0);
    st.upsilon.assign(n, 0.0);
    st.r1.assign(n, 0.0);
    st.r2.assign(n, 0.0);
    st.theta1.assign(n, sol.params.beta);
    st.theta2.assign(n, sol.params.beta);

    auto weighted_delta = [&](const FreeInterfaceState& a, const FreeInterfaceState& b) {
      double d = 0;
      for (int j = 0; j < n; ++j) {
        const double xg = a.x[j];
        d = std::max(d, std::abs(a.phi[j] - b.phi[j]) / std::pow(xg, sol.params.sigma + 1));
        d = std::max(d, std::abs(a.dphi[j] - b.dphi[j]) / std::pow(xg, sol.params.sigma));
        d = std::max(d, std::abs(a.t1[j] - b.t1[j]) / (xg * xg));
        d = std::max(d, std::abs(a.t2[j] - b.t2[j]) / (xg * xg));
      }
      return d;
    };

    bool restart = false;
    double prev_delta = std::numeric_limits<double>::infinity();
    double worst_ratio = 0;
    int iters = 0;
    int calm = 0;  // consecutive iterates pinned at the roundoff floor
    for (int it = 1; it <= 100; ++it) {
      FreeInterfaceState next;
      try {
        next = picard_step(st, sol.params);
      } catch (const Error& e) {
        if (e.code() == Err::LeftDomain) {
          restart = true;
          break;
        }
        throw;
      }
      const double delta = weighted_delta(next, st);
      st = std::move(next);
      iters = it;
      // The curvature-root solves leave a deterministic limit cycle near
      // 1e-9 in the weighted norm, so contraction ratios only mean
      // anything above that band.
      calm = delta < 1e-8 ? calm + 1 : 0;
      if (it >= 2 && delta > 1e-8 && prev_delta > 1e-13) {
        const double ratio = delta / prev_delta;
        worst_ratio = std::max(worst_ratio, ratio);
        if (ratio > 0.5) {
          restart = true;
          break;
        }
      }
      if (delta < 1e-10 || calm >= 6) {
        sol.state = std::move(st);
        sol.params.x_dagger = xd;
        sol.iterations = iters;
        sol.final_norm_delta = delta;
        sol.contraction = worst_ratio;
        return sol;
      }
      prev_delta = delta;
    }
    if (!restart) restart = true;  // hit the iteration cap without converging
    xd *= 0.5;
    ++sol.halvings;
  }
  fail(Err::NoContraction, "no contracting window above the minimum x_dagger");
}

}  // namespace movset::corner
