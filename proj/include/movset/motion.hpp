#pragma once

#include <map>
#include <string>
#include <vector>

#include "movset/geometry.hpp"

namespace movset {

// One snapshot of an evolving region.  `boundary` is the relative boundary
// inside V (chains keep the region on the left); `area` and `rel_perimeter`
// are stored at capture time so frames stay meaningful even when the chain
// list is empty (fully cleared or fully contaminated states).
struct MotionFrame {
  double t = 0;
  geom::Boundary boundary;
  double area = 0;
  double rel_perimeter = 0;
};

enum class MotionStatus { Complete, Stalled };

struct Motion {
  std::vector<MotionFrame> frames;
  MotionStatus status = MotionStatus::Complete;
  double stall_area = 0;  // meaningful only when status == Stalled
  std::vector<double> phase_breaks;
  std::map<std::string, double> meta;

  double duration() const { return frames.empty() ? 0 : frames.back().t - frames.front().t; }
};

}  // namespace movset
