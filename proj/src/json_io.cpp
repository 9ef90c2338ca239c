#include "movset/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "movset/errors.hpp"

namespace movset::io {

namespace {

const json& need(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) fail(Err::Config, std::string("missing field '") + field + "'");
  return *it;
}

double need_num(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_number()) fail(Err::Config, std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

std::string need_str(const json& j, const char* field) {
  const json& v = need(j, field);
  if (!v.is_string()) fail(Err::Config, std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

geom::Vec2 as_vec2(const json& v, const char* field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(Err::Config, std::string("field '") + field + "' must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

json vec2_to_json(const geom::Vec2& p) { return json::array({p.x(), p.y()}); }

// Shortest round-trip formatting, shared by CSV and SVG so every emitted
// number matches the JSON files byte for byte.
std::string num(double x) { return json(x).dump(); }

}  // namespace

json domain_to_json(const geom::Domain& V) {
  json j;
  if (const auto* d = std::get_if<geom::Disc>(&V)) {
    j["type"] = "disc";
    j["params"] = {{"radius", d->radius}};
  } else if (const auto* w = std::get_if<geom::Wedge>(&V)) {
    j["type"] = "wedge";
    j["params"] = {{"alpha", w->alpha}, {"reach", w->reach}};
  } else if (const auto* p = std::get_if<geom::ConvexPolygon>(&V)) {
    json verts = json::array();
    for (const auto& v : p->verts) verts.push_back(vec2_to_json(v));
    j["type"] = "polygon";
    j["params"] = {{"verts", verts}};
  } else {
    fail(Err::Unsupported, "cap domains carry closures and have no JSON form");
  }
  return j;
}

geom::Domain domain_from_json(const json& j) {
  if (!j.is_object()) fail(Err::Config, "domain must be an object {type, params}");
  const std::string type = need_str(j, "type");
  if (type == "triangle") return geom::unit_triangle();
  const json params = j.value("params", json::object());
  if (type == "disc") {
    geom::Disc d;
    d.radius = need_num(params, "radius");
    if (!(d.radius > 0)) fail(Err::Config, "disc radius must be positive");
    return d;
  }
  if (type == "wedge") {
    geom::Wedge w;
    w.alpha = need_num(params, "alpha");
    w.reach = need_num(params, "reach");
    if (!(w.alpha > 0 && w.alpha < num::kPi / 2))
      fail(Err::Config, "wedge alpha must lie in (0, pi/2)");
    if (!(w.reach > 0)) fail(Err::Config, "wedge reach must be positive");
    return w;
  }
  if (type == "polygon") {
    const json& verts = need(params, "verts");
    if (!verts.is_array() || verts.size() < 3)
      fail(Err::Config, "polygon needs at least 3 vertices");
    geom::ConvexPolygon p;
    for (const auto& v : verts) p.verts.push_back(as_vec2(v, "verts"));
    return p;
  }
  fail(Err::Config, "unknown domain type '" + type + "'");
}

json piece_to_json(const geom::CircArc& a) {
  json j;
  j["kind"] = a.kind == geom::ArcKind::free_arc ? "free" : "controlled";
  j["beta"] = a.beta;
  j["beta0"] = a.beta0;
  j["beta1"] = a.beta1;
  if (a.is_segment()) {
    j["r"] = nullptr;
    j["p0"] = vec2_to_json(a.p0);
    j["p1"] = vec2_to_json(a.p1);
  } else {
    j["cx"] = a.center.x();
    j["cy"] = a.center.y();
    j["r"] = a.radius;
    j["a0"] = a.a0;
    j["a1"] = a.a1;
  }
  return j;
}

geom::CircArc piece_from_json(const json& j) {
  if (!j.is_object()) fail(Err::Config, "boundary piece must be an object");
  const std::string kind_name = need_str(j, "kind");
  geom::ArcKind kind;
  if (kind_name == "free")
    kind = geom::ArcKind::free_arc;
  else if (kind_name == "controlled")
    kind = geom::ArcKind::controlled;
  else
    fail(Err::Config, "piece kind must be 'free' or 'controlled'");
  const double beta = need_num(j, "beta");

  geom::CircArc a;
  const bool segment = !j.contains("r") || j["r"].is_null();
  if (segment) {
    a = geom::make_segment(as_vec2(need(j, "p0"), "p0"), as_vec2(need(j, "p1"), "p1"), kind,
                           beta);
  } else {
    a = geom::make_arc({need_num(j, "cx"), need_num(j, "cy")}, need_num(j, "r"),
                       need_num(j, "a0"), need_num(j, "a1"), kind, beta);
  }
  a.beta0 = j.value("beta0", beta);
  a.beta1 = j.value("beta1", beta);
  return a;
}

json boundary_to_json(const geom::Boundary& b) {
  json chains = json::array();
  for (const auto& chain : b.chains) {
    json c = json::array();
    for (const auto& piece : chain) c.push_back(piece_to_json(piece));
    chains.push_back(std::move(c));
  }
  return json{{"chains", std::move(chains)}};
}

geom::Boundary boundary_from_json(const json& j) {
  const json& chains = need(j, "chains");
  if (!chains.is_array()) fail(Err::Config, "field 'chains' must be an array of arrays");
  geom::Boundary b;
  for (const auto& c : chains) {
    if (!c.is_array()) fail(Err::Config, "each chain must be an array of pieces");
    std::vector<geom::CircArc> chain;
    for (const auto& piece : c) chain.push_back(piece_from_json(piece));
    b.chains.push_back(std::move(chain));
  }
  return b;
}

json frame_to_json(const MotionFrame& f) {
  json j = boundary_to_json(f.boundary);
  j["t"] = f.t;
  j["area"] = f.area;
  j["rel_perimeter"] = f.rel_perimeter;
  return j;
}

MotionFrame frame_from_json(const json& j) {
  MotionFrame f;
  f.t = need_num(j, "t");
  f.area = need_num(j, "area");
  f.rel_perimeter = need_num(j, "rel_perimeter");
  f.boundary = boundary_from_json(j);
  return f;
}

void write_motion_jsonl(std::ostream& out, const Motion& m) {
  json header;
  header["schema"] = 1;
  header["status"] = m.status == MotionStatus::Complete ? "complete" : "stalled";
  header["stall_area"] = m.stall_area;
  header["phase_breaks"] = m.phase_breaks;
  header["meta"] = m.meta;
  header["frames"] = m.frames.size();
  out << header.dump() << "\n";
  for (const auto& f : m.frames) out << frame_to_json(f).dump() << "\n";
}

void write_motion_jsonl(const std::string& path, const Motion& m) {
  std::ofstream out(path);
  if (!out) fail(Err::Config, "cannot open '" + path + "' for writing");
  write_motion_jsonl(out, m);
}

Motion read_motion_jsonl(std::istream& in) {
  Motion m;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(Err::Config, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!saw_header && j.is_object() && j.contains("schema")) {
      saw_header = true;
      if (j["schema"] != 1)
        fail(Err::Config, "unsupported motion schema " + j["schema"].dump());
      const std::string status = j.value("status", "complete");
      m.status = status == "stalled" ? MotionStatus::Stalled : MotionStatus::Complete;
      m.stall_area = j.value("stall_area", 0.0);
      if (j.contains("phase_breaks"))
        m.phase_breaks = j["phase_breaks"].get<std::vector<double>>();
      if (j.contains("meta"))
        for (const auto& [k, v] : j["meta"].items()) m.meta[k] = v.get<double>();
      continue;
    }
    m.frames.push_back(frame_from_json(j));
  }
  return m;
}

Motion read_motion_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::Config, "cannot open '" + path + "'");
  return read_motion_jsonl(in);
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) fail(Err::Config, "scenario must be a JSON object");
  if (need(j, "schema") != 1)
    fail(Err::Config, "unsupported scenario schema " + j["schema"].dump());
  Scenario s;
  s.name = j.value("name", std::string("scenario"));
  s.domain = domain_from_json(need(j, "domain"));
  s.effort = need_num(j, "effort");
  if (!(s.effort > 0)) fail(Err::Config, "effort must be positive");
  s.kappa1 = j.value("kappa1", 1.0);
  s.kappa2 = j.value("kappa2", 0.0);
  if (s.kappa1 < 0 || s.kappa2 < 0) fail(Err::Config, "cost weights must be nonnegative");
  s.solver = need_str(j, "solver");
  if (j.contains("tolerances")) {
    const json& tols = j["tolerances"];
    if (!tols.is_object()) fail(Err::Config, "field 'tolerances' must be an object");
    for (const auto& [k, v] : tols.items()) {
      if (!v.is_number()) fail(Err::Config, "tolerance '" + k + "' must be a number");
      s.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) fail(Err::Config, "field 'output' must be an object");
    s.output.jsonl = o.value("jsonl", true);
    s.output.csv = o.value("csv", false);
    s.output.svg = o.value("svg", false);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::Config, "cannot open scenario '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Err::Config, path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(Err::Config, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << num(row[i]);
    out << "\n";
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) fail(Err::Config, "cannot open '" + path + "' for writing");
  write_csv(out, header, rows);
}

namespace {

struct Mapper {
  double scale;
  geom::Vec2 lo, hi;
  // SVG y grows downward; flip about the box center.
  geom::Vec2 operator()(const geom::Vec2& p) const {
    const geom::Vec2 c = 0.5 * (lo + hi);
    return {400 + (p.x() - c.x()) * scale, 400 - (p.y() - c.y()) * scale};
  }
};

Mapper fit_domain(const geom::Domain& V) {
  geom::Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
  for (const auto& piece : geom::rim_pieces(V))
    for (int k = 0; k <= 16; ++k) {
      const geom::Vec2 p = piece.point_at(k / 16.0);
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-9});
  return {800 * 0.9 / span, lo, hi};
}

// Elliptical-arc commands degenerate at sweeps of 2*pi, so arcs are emitted
// in sub-quarter chunks.
void append_piece_path(std::string& d, const geom::CircArc& a, const Mapper& map) {
  if (a.is_segment()) {
    const geom::Vec2 q = map(a.p1);
    d += " L " + num(q.x()) + " " + num(q.y());
    return;
  }
  const double da = a.a1 - a.a0;
  const int chunks = std::max(1, static_cast<int>(std::ceil(std::abs(da) / (num::kPi / 2))));
  const std::string r = num(a.radius * map.scale);
  const char* sweep = da > 0 ? "0" : "1";  // ccw in the plane is cw on screen
  for (int k = 1; k <= chunks; ++k) {
    const geom::Vec2 q = map(a.point_at(static_cast<double>(k) / chunks));
    d += " A " + r + " " + r + " 0 0 " + sweep + " " + num(q.x()) + " " + num(q.y());
  }
}

std::string path_for(const std::vector<geom::CircArc>& chain, const Mapper& map) {
  if (chain.empty()) return {};
  const geom::Vec2 s = map(chain.front().start());
  std::string d = "M " + num(s.x()) + " " + num(s.y());
  for (const auto& piece : chain) append_piece_path(d, piece, map);
  return d;
}

}  // namespace

std::string svg_frame(const geom::Domain& V, const MotionFrame& f) {
  const Mapper map = fit_domain(V);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  out << "<path d=\"" << path_for(geom::rim_pieces(V), map)
      << " Z\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1.5\"/>\n";
  for (const auto& chain : f.boundary.chains) {
    // split by effort kind so free and controlled parts are distinguishable
    std::size_t i = 0;
    while (i < chain.size()) {
      std::size_t k = i;
      while (k < chain.size() && chain[k].kind == chain[i].kind) ++k;
      std::vector<geom::CircArc> run(chain.begin() + i, chain.begin() + k);
      const char* color =
          chain[i].kind == geom::ArcKind::free_arc ? "#1f77b4" : "#d62728";
      out << "<path d=\"" << path_for(run, map) << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      i = k;
    }
  }
  out << "<text x=\"12\" y=\"24\" font-family=\"monospace\" font-size=\"16\">t=" << num(f.t)
      << " area=" << num(f.area) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_svg_frame(const std::string& path, const geom::Domain& V, const MotionFrame& f) {
  std::ofstream out(path);
  if (!out) fail(Err::Config, "cannot open '" + path + "' for writing");
  out << svg_frame(V, f);
}

}  // namespace movset::io
