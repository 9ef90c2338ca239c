#pragma once

#include <vector>

namespace movset::corner {

// Growth exponent of the interface offset near a corner of half-opening
// beta: sigma = (beta - sin(beta)cos(beta)) / (2 cos(beta)(sin(beta) -
// beta cos(beta))).  Series below 1e-3; +infinity at beta = pi/2.
double sigma_of_beta(double beta);

// Assembled matching data at one station x of the corner interface, for
// offset phi with slopes dphi, ddphi and crossing times t1, t2.
struct CornerRhs {
  double T1 = 0, T2 = 0;  // dt1/dx, dt2/dx
  double F = 0, G = 0;    // the two sides of the matching condition
  double H = 0;           // G - F; the interface ODE sets H = 0
  double r1 = 0, r2 = 0;  // contact radii of the two controlled arcs
  double theta = 0;       // interface slope angle atan(dphi)
  double omega = 0;       // interface curvature
  // Sum of the magnitudes of H's addends; H itself is a near-cancellation of
  // these, so |H| below ~1e-15 of this scale is numerically zero.
  double noise_scale = 0;
};

// Throws AngleDegeneracy when beta +- theta leaves (0, pi) or its sine
// underflows.
CornerRhs corner_rhs(double x, double phi, double dphi, double ddphi, double t1, double t2,
                     double beta, double M);

// Solves H(ddphi) = 0 for the curvature variable Upsilon = ddphi at one
// station: Newton from the similarity guess sigma*dphi/x with bisection
// fallback.  Throws NoConvergence when no root is bracketed.
double solve_upsilon(double x, double phi, double dphi, double t1, double t2, double beta,
                     double M, double upsilon_guess);

struct CornerParams {
  double beta = 0;
  double M = 0;
  double c = 0;        // leading similarity coefficient: phi ~ c x^(sigma+1)
  double sigma = 0;
  double C0 = 0;       // domain constant for the a-priori bounds
  double x_dagger = 0; // right end of the validity window
};

struct FreeInterfaceState {
  std::vector<double> x;  // ascending geometric grid on (0, x_dagger]
  std::vector<double> phi, dphi, t1, t2, upsilon, r1, r2;
  // contact angles beta -+ theta of the two arcs, theta = atan(dphi)
  std::vector<double> theta1, theta2;
};

struct CornerSolution {
  CornerParams params;
  FreeInterfaceState state;
  int iterations = 0;
  int halvings = 0;          // times x_dagger was halved to restore contraction
  double final_norm_delta = 0;
  double contraction = 0;    // worst iterate-to-iterate ratio after burn-in
};

// One Picard sweep: solve Upsilon nodewise, integrate the crossing times
// from T1, T2 and the offset from the similarity-weighted curvature
// integral.  Throws LeftDomain when the update leaves the a-priori bounds
// |t_i| <= C0 x^2, |phi| <= C0 x^(sigma+1), |dphi| <= C0 x^sigma.
FreeInterfaceState picard_step(const FreeInterfaceState& s, const CornerParams& p);

// Fixed-point construction of the free interface emanating from a corner:
// geometric grid spanning [1e-7 x_dagger, x_dagger], Picard iteration to
// weighted sup-norm 1e-10, x_dagger halved whenever the iteration leaves
// the domain or contracts slower than 0.5.  Throws NoContraction when
// x_dagger shrinks below 1e-8.
CornerSolution corner_interface(double beta, double c, double M, double x_dagger = 0.1,
                                int nodes = 200);

}  // namespace movset::corner
