#pragma once

#include "movset/geometry.hpp"

namespace movset::dido {

using geom::Domain;

// Family a minimal-length cut was taken from.
enum class CutFamily { diameter, orthogonal_circle, corner_sector, edge_half_disc, smooth_perp };

const char* family_name(CutFamily f);

// A cut splitting V into a region of area `a` (on the left of the chains)
// and its complement.  Every cut crosses the rim of V perpendicularly.
//
// `length` is the reported cut size used by g_of_a.  For corner-sector
// families this follows the sector-radius convention sqrt(2a/theta) rather
// than the true arc length; all other families report arc length.
struct DidoCut {
  geom::Boundary cut;
  double a = 0;
  double length = 0;
  CutFamily family = CutFamily::diameter;
  int anchor = -1;  // vertex/edge index for polygon families
};

// Shortest-cut value g(a) and the realizing cut.
DidoCut dido_cut(const Domain& V, double a);
double g_of_a(const Domain& V, double a);

// Bottleneck sup_a g(a) over a sampling grid with golden refinement.
double kappa(const Domain& V, int grid = 512);

// Best sweep bound: minimum over slicing families of the longest slice
// (directional line sweeps plus vertex-distance sweeps for polygons).
double K_upper(const Domain& V);

enum class Verdict { Eradicable, NotEradicable, Unknown };

struct FeasibilityReport {
  double kappa = 0;
  double K_upper = 0;
  Verdict verdict = Verdict::Unknown;
  double margin = 0;  // signed distance from M to the nearest threshold
};

// Compares the effort budget M against the invariants of V.
FeasibilityReport eradication_verdict(const Domain& V, double M);

}  // namespace movset::dido
