#pragma once

#include <string>
#include <vector>

#include "movset/motion.hpp"

namespace movset::adjoint {

using geom::Domain;

// Shadow price along one boundary trajectory, integrated against the sampled
// curvature history.  Y solves dY/dt = -omega Y - kappa1 backward from
// Y(T) = kappa2; A solves dA/dt = omega A forward from A(times[0]) = 1.
struct AdjointTrajectory {
  std::string xi;
  std::vector<double> times;
  std::vector<double> omega;
  std::vector<double> Y;
  std::vector<double> A;
  double kappa1 = 0;
  double kappa2 = 1;
  // |Y(times[0]) - (kappa1 * integral(A) + kappa2 * A(T))| / |Y(times[0])|
  double duality_residual = 0;
};

// Curvature samples are interpolated linearly between the given times; the
// horizon is times.back().  Requires at least two strictly increasing times.
AdjointTrajectory solve_adjoint(const std::vector<double>& times,
                                const std::vector<double>& omega, double kappa1,
                                double kappa2);

struct MaxPrincipleViolation {
  double t = 0;
  std::string trajectory;
  double Y = 0;
  double Y_max = 0;
};

struct MaxPrincipleReport {
  int windows = 0;
  int trajectories = 0;
  std::vector<MaxPrincipleViolation> active_below_max;  // beta > -1 but Y short of the max
  std::vector<double> curvature_mismatch_times;  // controlled arcs with unequal curvature
  double worst_Y_gap = 0;
  double worst_curvature_gap = 0;
  // Trajectory labels are only defined while the boundary keeps its piece
  // structure, so the check runs per topology-constant window.
  std::string note = "restricted to topology-constant windows";
  bool ok() const { return active_below_max.empty() && curvature_mismatch_times.empty(); }
};

// Reconstructs boundary trajectories by nearest-point marching between
// frames, solves the adjoint on each, and flags points that exert effort
// without maximal shadow price, plus controlled arcs whose curvatures
// disagree at equal times.  With min_time set the weights are forced to
// (0, 1).  Report-only; throws TrajectoryReconstructionFailed only when the
// marching itself loses the boundary.
MaxPrincipleReport check_max_principle(const Motion& motion, double kappa1, double kappa2,
                                       double tol, bool min_time = false);

struct JunctionReport {
  int junctions_checked = 0;
  int rim_contacts_checked = 0;
  int tangency_violations = 0;
  int rim_violations = 0;
  double worst_tangency_angle = 0;  // radians
  double worst_rim_angle = 0;       // deviation from pi/2, radians
  bool ok() const { return tangency_violations == 0 && rim_violations == 0; }
};

// Interior junctions touching a controlled arc must be tangential; a
// controlled arc meeting the rim must do so perpendicularly or with zero
// effort at the endpoint.
JunctionReport check_junctions(const Motion& motion, const Domain& V, double tol_ang);

// A trajectory crossing a free arc: entry/exit times with the boundary
// curvature along the trajectory and the controlled-arc curvature at the
// same times.
struct FreeArcCrossing {
  double t1 = 0;
  double t2 = 0;
  std::vector<double> times;
  std::vector<double> omega_xi;
  std::vector<double> omega_star;
};

// |integral of omega_xi - integral of omega_star| over [t1, t2]; throws
// TimesNotBracketed when the window is empty or leaves the motion's span.
double check_free_arc_condition(const Motion& motion, const FreeArcCrossing& crossing);

}  // namespace movset::adjoint
