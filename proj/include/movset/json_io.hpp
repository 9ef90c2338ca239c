#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "movset/geometry.hpp"
#include "movset/motion.hpp"

namespace movset::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Interchange schema.  Domains serialize as {"type": ..., "params": {...}};
// boundary pieces as {cx, cy, r, a0, a1, kind, beta, beta0, beta1} for arcs
// and {p0, p1, kind, beta, beta0, beta1} with "r": null for segments.  Caps
// carry caller-supplied closures and are not serializable.
// ---------------------------------------------------------------------------

json domain_to_json(const geom::Domain& V);
// Accepts "disc", "wedge", "polygon", and the named convenience "triangle"
// (the unit equilateral triangle).  Throws Err::Config with a field
// diagnostic on anything malformed.
geom::Domain domain_from_json(const json& j);

json piece_to_json(const geom::CircArc& a);
geom::CircArc piece_from_json(const json& j);

json boundary_to_json(const geom::Boundary& b);
geom::Boundary boundary_from_json(const json& j);

json frame_to_json(const MotionFrame& f);
MotionFrame frame_from_json(const json& j);

// JSON-lines layout: a header object (recognized by its "schema" key) with
// status, stall_area, phase_breaks, and meta, then one frame per line.
void write_motion_jsonl(std::ostream& out, const Motion& m);
void write_motion_jsonl(const std::string& path, const Motion& m);
// Tolerates a missing header (a bare stream of frame lines).
Motion read_motion_jsonl(std::istream& in);
Motion read_motion_jsonl(const std::string& path);

// ---------------------------------------------------------------------------
// Scenario files ("schema": 1).  `solver` selects the pipeline; unknown
// names are rejected by the CLI dispatcher rather than here so the parser
// stays reusable.
// ---------------------------------------------------------------------------

struct OutputOptions {
  bool jsonl = true;
  bool csv = false;
  bool svg = false;
};

struct Scenario {
  std::string name;
  geom::Domain domain;
  double effort = 1.0;
  double kappa1 = 1.0;
  double kappa2 = 0.0;
  std::string solver;
  std::map<std::string, double> tolerances;
  OutputOptions output;
};

Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::string& path);

// ---------------------------------------------------------------------------
// Emission helpers.
// ---------------------------------------------------------------------------

// Serialized with a trailing newline; nlohmann's shortest-round-trip float
// formatting keeps re-runs byte-identical.
void write_json_file(const std::string& path, const json& j);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// One frame per file, fixed 800x800 viewport, V auto-fitted with a small
// margin.  Rim in grey, free arcs blue, controlled arcs red.
std::string svg_frame(const geom::Domain& V, const MotionFrame& f);
void write_svg_frame(const std::string& path, const geom::Domain& V, const MotionFrame& f);

}  // namespace movset::io
