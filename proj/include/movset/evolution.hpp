#pragma once

#include "movset/motion.hpp"

namespace movset::evo {

using geom::Domain;

struct TriangleStrategyResult {
  double M = 0;
  double r_star = 0;   // stage-2 starting radius from the shooting solve
  double t_star = 0;   // stage-1 duration
  double T = 0;        // total clearing time
  double lambda = 0;   // (sqrt(3) - pi/3) / M
  Motion motion;
};

// Threshold effort below which the four-phase strategy cannot close.
double triangle_threshold();

// Four-phase clearing of the unit equilateral triangle with vertices
// (0,0), (1,0), (1/2, sqrt(3)/2): a growing corner sector at the first
// vertex, a sweep by a controlled arc with a trailing free segment, then
// the two mirror phases.  Throws BelowThreshold when M is at or below the
// threshold, ShootingFailed when the radius solve does not bracket.
TriangleStrategyResult triangle_strategy(double M, double frame_stride = 1e-3);

// Two-stage clearing of the wedge V = {0 < x1 < K, 0 < x2 < x1} from the
// initial contaminated half {x1 > K/2}: stage 1 is a one-parameter arc
// family perpendicular to the base with a freely retreating endpoint on the
// diagonal, closed by the effort identity; stage 2 is corner-centered arcs.
// Stage 2 stops at radius 0.98*K (the constant-aperture regime); the
// residual area is recorded in meta.  Status Stalled when the stage-2 rate
// reaches zero before that radius.
Motion wedge_strategy(double K, double M);

// Advance one frame by dt: free pieces offset at unit speed away from the
// contaminated side, the single controlled arc re-fitted within its
// one-parameter perpendicular family so the area change equals
// (rel_perimeter - M) * dt.  Supports a lone controlled arc anchored to the
// rim, or a controlled arc joined to one free segment.
MotionFrame generic_step(const Domain& V, const MotionFrame& frame, double M, double dt);

struct AdmissibilityReport {
  int pairs_checked = 0;
  int containment_violations = 0;
  int cleared_violations = 0;
  double worst_containment = 0;   // largest excess distance / h
  double worst_cleared_ratio = 0;  // largest cleared / (M h)
  bool ok() const { return containment_violations == 0 && cleared_violations == 0; }
};

// Discrete admissibility audit of a motion: every consecutive pair must
// satisfy containment in the h-ball of the previous set intersected with V,
// and the cleared area per step must stay within M*h*(1+tol_eff).
AdmissibilityReport admissibility_check(const Motion& motion, const Domain& V, double M,
                                        double tol_eff = 1e-3);

}  // namespace movset::evo
