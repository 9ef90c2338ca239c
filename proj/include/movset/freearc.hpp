#pragma once

namespace movset::freearc {

// Chord data of the symmetric free arc spanning a gap of curvature radius
// rho at effort M: chord length ell and end slope parameter h, tied by
// (ell/2)(1+h) = M and h*ell = 2*rho*(1+h).
struct SymmetricArcSolution {
  double M = 0;
  double rho = 0;
  double ell = 0;
  double h = 0;
};

// Smaller root of ell^2 - 2*M*ell + 4*rho*M = 0, evaluated in the
// cancellation-free form 4*rho / (1 + sqrt(1 - 4*rho/M)).  Throws
// Subcritical when M < 4*rho.
SymmetricArcSolution symmetric_free_arc(double M, double rho);

// Local rates at a junction between a free arc and a controlled arc meeting
// the rim obliquely: half-angle theta_star, contact radius r_star, boundary
// curvature omega on the controlled side, free-arc curvature omega_sharp.
struct FreeArcRates {
  double theta_star = 0;
  double r_star = 0;
  double omega = 0;
  double omega_sharp = 0;
  double M = 0;
  double Qdot_mag = 0;      // speed of the junction point along the rim
  double dr_dzeta = 0;      // radius change per unit motion of the far contact
  double ddelta_dzeta = 0;  // offset change per unit motion of the far contact
  double ddelta_dxi = 0;    // offset change per unit motion of the near contact
  double dr_dxi = 0;
  double dxi_dt = 0;        // speed of the near contact in its own parameter
};

// Throws DegenerateDenominator when the dxi_dt denominator vanishes.
FreeArcRates free_arc_rates(double theta_star, double r_star, double omega,
                            double omega_sharp, double M);

// Residual of the differentiated matching condition for a trajectory that
// enters the free arc at t1 and leaves at t2 (derivatives taken in the
// transverse parameter xi): zero exactly when the free-arc curvature
// omega_sharp balances the boundary curvatures at the two crossing times.
double free_arc_curvature_rhs(double t1, double t2, double dt1_dxi, double dt2_dxi,
                              double omega_at_t1, double omega_at_t2, double omega_sharp);

}  // namespace movset::freearc
