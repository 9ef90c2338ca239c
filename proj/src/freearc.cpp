#include "movset/freearc.hpp"

#include <cmath>

#include "movset/errors.hpp"
#include "movset/numerics.hpp"

namespace movset::freearc {

SymmetricArcSolution symmetric_free_arc(double M, double rho) {
  if (!(M > 0) || !(rho > 0)) fail(Err::OutOfRange, "M and rho must be positive");
  const double q = 4 * rho / M;
  if (q > 1) fail(Err::Subcritical, "no real chord below M = 4*rho");
  SymmetricArcSolution s;
  s.M = M;
  s.rho = rho;
  s.ell = 4 * rho / (1 + std::sqrt(1 - q));
  s.h = 2 * M / s.ell - 1;
  return s;
}

FreeArcRates free_arc_rates(double theta_star, double r_star, double omega,
                            double omega_sharp, double M) {
  if (!(theta_star > 0) || !(theta_star < num::kPi) || !(r_star > 0) || !(M > 0))
    fail(Err::OutOfRange, "invalid junction configuration");
  FreeArcRates f;
  f.theta_star = theta_star;
  f.r_star = r_star;
  f.omega = omega;
  f.omega_sharp = omega_sharp;
  f.M = M;
  const double st = std::sin(theta_star);
  const double ct = std::cos(theta_star);
  f.Qdot_mag = 2 * M / (theta_star * r_star) - 1;
  f.dr_dzeta = -r_star * omega * ct / st - 1;
  f.ddelta_dzeta = -r_star * omega / st;
  f.ddelta_dxi = (1 - omega_sharp * r_star) * ct / st;
  f.dr_dxi = (1 - omega_sharp * r_star) / st;
  const double denom = (1 - omega_sharp * r_star) * (1 - ct) / st;
  if (std::abs(denom) < 1e-12 * (1 + std::abs(omega_sharp * r_star)))
    fail(Err::DegenerateDenominator, "contact-speed relation degenerates");
  f.dxi_dt = (1 + (f.ddelta_dzeta - f.dr_dzeta) * f.Qdot_mag) / denom;
  return f;
}

double free_arc_curvature_rhs(double t1, double t2, double dt1_dxi, double dt2_dxi,
                              double omega_at_t1, double omega_at_t2, double omega_sharp) {
  const double d1 = 1 + t1 * omega_sharp;
  const double d2 = 1 + t2 * omega_sharp;
  if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
    fail(Err::DegenerateDenominator, "crossing time at the free-arc focal point");
  return omega_sharp / d2 * dt2_dxi - omega_sharp / d1 * dt1_dxi -
         (omega_at_t2 * dt2_dxi - omega_at_t1 * dt1_dxi);
}

}  // namespace movset::freearc
