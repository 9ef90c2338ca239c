#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "movset/dido.hpp"
#include "movset/motion.hpp"

namespace movset::mintime {

using geom::Domain;
using geom::Vec2;

// Lower bound on the time needed to shrink the contaminated area from a_from
// to a_to: integral of da / (M - g(a)).  `T` is empty when the integral
// diverges (the clearing rate touches the cut length somewhere on the way).
struct TimeResult {
  std::optional<double> T;
  std::vector<std::pair<double, double>> integrand_samples;  // (a, 1/(M-g))

  bool finite() const { return T.has_value(); }
};

TimeResult min_time(const Domain& V, double M, double a_from, double a_to = 0);

// Evolve the contaminated area along the isoperimetric cut family at the
// maximal admissible rate da/dt = g(a) - M.  Frames are captured every
// integrator step: uniform steps of frame_stride (default 1e-3 * area(V) / M,
// which bounds the area change per frame by 1e-3 * area(V)), shrinking
// geometrically near a = 0 and a = area(V) where g has sqrt-type kinks.
// Status Stalled with the limiting area when M - g(a) falls below the
// divergence threshold; Complete otherwise, with an empty final boundary at
// a = 0.
Motion dido_flow(const Domain& V, double M, double a0, double frame_stride = 0);

// Constructive slicing sweep: Omega(t) = {phi >= s(t)} for the normalized
// distance field phi(p) = |p - anchor| / d_max, shrunk at the constant area
// rate b1*M/(1+b1) until the eradication time T = (1+b1)*area(V)/(b1*M).
// Throws Err::SlicingTooLong when some level is longer than M/(1+b1).
Motion levelset_eradication(const Domain& V, const Vec2& anchor, double M, double b1,
                            double frame_stride = 0.02);

}  // namespace movset::mintime
