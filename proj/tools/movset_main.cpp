#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "movset/adjoint.hpp"
#include "movset/corner.hpp"
#include "movset/dido.hpp"
#include "movset/errors.hpp"
#include "movset/evolution.hpp"
#include "movset/freearc.hpp"
#include "movset/json_io.hpp"
#include "movset/mintime.hpp"

namespace {

using movset::Err;
using movset::Error;
using movset::Motion;
using movset::fail;
using movset::io::json;
namespace geom = movset::geom;
namespace io = movset::io;
namespace fs = std::filesystem;

struct DomainOpts {
  std::string spec;  // inline JSON or a path to a JSON file
  std::string preset;
  double radius = 1.0;
  double alpha = movset::num::kPi / 4;
  double reach = 1.0;
};

void add_domain_flags(CLI::App* cmd, DomainOpts& o) {
  cmd->add_option("--domain", o.spec, "domain as inline JSON or a path to a JSON file");
  cmd->add_option("--preset", o.preset, "named domain: disc, triangle, wedge")
      ->check(CLI::IsMember({"disc", "triangle", "wedge"}));
  cmd->add_option("--radius", o.radius, "disc radius (with --preset disc)");
  cmd->add_option("--alpha", o.alpha, "wedge half-opening (with --preset wedge)");
  cmd->add_option("--reach", o.reach, "wedge reach (with --preset wedge)");
}

bool has_domain(const DomainOpts& o) { return !o.spec.empty() || !o.preset.empty(); }

json parse_json_arg(const std::string& arg, const char* what) {
  if (!arg.empty() && arg.front() == '{') {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      fail(Err::Config, std::string(what) + ": " + e.what());
    }
  }
  std::ifstream in(arg);
  if (!in) fail(Err::Config, std::string(what) + ": cannot open '" + arg + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Err::Config, arg + ": " + e.what());
  }
}

geom::Domain resolve_domain(const DomainOpts& o) {
  if (!o.spec.empty()) return io::domain_from_json(parse_json_arg(o.spec, "--domain"));
  if (o.preset == "disc") return geom::Disc{o.radius};
  if (o.preset == "triangle") return geom::unit_triangle();
  if (o.preset == "wedge") return geom::Wedge{o.alpha, o.reach};
  fail(Err::Config, "no domain given: pass --domain or --preset");
}

struct OutOpts {
  std::string dir;
  bool svg = false;
};

void add_out_flags(CLI::App* cmd, OutOpts& o) {
  cmd->add_option("--out", o.dir, "write artifacts into this directory instead of stdout");
  cmd->add_flag("--svg", o.svg, "also write one SVG per frame (requires --out)");
}

void write_frames_svg(const std::string& dir, const std::string& stem,
                      const geom::Domain& V, const Motion& m) {
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "%06zu", i);
    io::write_svg_frame(dir + "/" + stem + "_" + idx + ".svg", V, m.frames[i]);
  }
}

void emit_motion(const Motion& m, const geom::Domain& V, const OutOpts& out,
                 const std::string& stem) {
  if (out.dir.empty()) {
    io::write_motion_jsonl(std::cout, m);
    return;
  }
  fs::create_directories(out.dir);
  io::write_motion_jsonl(out.dir + "/" + stem + ".jsonl", m);
  if (out.svg) write_frames_svg(out.dir, stem, V, m);
}

void emit_summary(const json& summary, const OutOpts& out, const std::string& stem) {
  if (out.dir.empty()) {
    std::cout << summary.dump() << "\n";
    return;
  }
  fs::create_directories(out.dir);
  io::write_json_file(out.dir + "/" + stem + ".summary.json", summary);
}

// Worst relative defect of the balance dA/dt = P - M over consecutive
// frames, with P averaged over the pair.
double worst_area_identity(const Motion& m, double M) {
  double worst = 0;
  for (std::size_t i = 0; i + 1 < m.frames.size(); ++i) {
    const auto& f0 = m.frames[i];
    const auto& f1 = m.frames[i + 1];
    double dt = f1.t - f0.t;
    if (dt <= 0) continue;
    double pbar = 0.5 * (f0.rel_perimeter + f1.rel_perimeter);
    double defect = std::abs((f1.area - f0.area) / dt - (pbar - M));
    worst = std::max(worst, defect / std::max(pbar, M));
  }
  return worst;
}

const char* verdict_name(movset::dido::Verdict v) {
  switch (v) {
    case movset::dido::Verdict::Eradicable: return "Eradicable";
    case movset::dido::Verdict::NotEradicable: return "NotEradicable";
    case movset::dido::Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

// --- subcommand handlers --------------------------------------------------

int run_dido(const DomainOpts& dom, double area, double fraction) {
  geom::Domain V = resolve_domain(dom);
  if (area < 0 && fraction < 0)
    fail(Err::Config, "pass --area or --area-fraction");
  double a = area >= 0 ? area : fraction * geom::domain_area(V);
  auto cut = movset::dido::dido_cut(V, a);
  json out;
  out["a"] = cut.a;
  out["g"] = cut.length;
  out["family"] = movset::dido::family_name(cut.family);
  out["anchor"] = cut.anchor;
  out["cut"] = io::boundary_to_json(cut.cut);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_feasibility(const DomainOpts& dom, double M) {
  geom::Domain V = resolve_domain(dom);
  auto rep = movset::dido::eradication_verdict(V, M);
  json out;
  out["effort"] = M;
  out["kappa"] = rep.kappa;
  out["K_upper"] = rep.K_upper;
  out["verdict"] = verdict_name(rep.verdict);
  out["margin"] = rep.margin;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_mintime(const DomainOpts& dom, double M, double from, double to) {
  geom::Domain V = resolve_domain(dom);
  double A = geom::domain_area(V);
  double a_from = from >= 0 ? from : A;
  auto res = movset::mintime::min_time(V, M, a_from, to);
  json out;
  out["effort"] = M;
  out["a_from"] = a_from;
  out["a_to"] = to;
  out["finite"] = res.finite();
  out["T"] = res.T ? json(*res.T) : json(nullptr);
  json samples = json::array();
  for (auto [a, v] : res.integrand_samples) samples.push_back({{"a", a}, {"integrand", v}});
  out["integrand_samples"] = std::move(samples);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_mintime_flow(const DomainOpts& dom, double M, double a0, double stride,
                     const OutOpts& out) {
  geom::Domain V = resolve_domain(dom);
  double A = geom::domain_area(V);
  Motion m = movset::mintime::dido_flow(V, M, a0 > 0 ? a0 : A, stride);
  emit_motion(m, V, out, "flow");
  json summary;
  summary["T"] = m.frames.empty() ? json(nullptr) : json(m.frames.back().t);
  summary["status"] = m.status == movset::MotionStatus::Complete ? "complete" : "stalled";
  summary["stall_area"] = m.stall_area;
  summary["residuals"] = {{"area_identity_rel", worst_area_identity(m, M)}};
  emit_summary(summary, out, "flow");
  return 0;
}

int run_mintime_slice(const DomainOpts& dom, double M, double b1,
                      const std::vector<double>& anchor, double stride, const OutOpts& out) {
  geom::Domain V = resolve_domain(dom);
  geom::Vec2 p(0, 0);
  if (!anchor.empty()) p = {anchor[0], anchor[1]};
  Motion m = movset::mintime::levelset_eradication(V, p, M, b1, stride);
  emit_motion(m, V, out, "slice");
  json summary;
  summary["T"] = m.frames.empty() ? json(nullptr) : json(m.frames.back().t);
  summary["rate"] = m.meta.at("rate");
  summary["threshold"] = m.meta.at("threshold");
  summary["sup_level"] = m.meta.at("sup_level");
  emit_summary(summary, out, "slice");
  return 0;
}

int run_simulate(const std::string& scenario, double M, double leg, double radius,
                 double stride, const OutOpts& out) {
  Motion m;
  geom::Domain V = geom::unit_triangle();
  json summary;
  summary["t_star"] = nullptr;
  summary["r_star"] = nullptr;
  if (scenario == "triangle") {
    auto res = movset::evo::triangle_strategy(M, stride > 0 ? stride : 1e-3);
    m = std::move(res.motion);
    summary["t_star"] = res.t_star;
    summary["r_star"] = res.r_star;
  } else if (scenario == "wedge") {
    m = movset::evo::wedge_strategy(leg, M);
    V = geom::ConvexPolygon{{{0, 0}, {leg, 0}, {leg, leg}}};
  } else {  // disc
    geom::Disc d{radius};
    V = d;
    m = movset::mintime::dido_flow(V, M, geom::domain_area(V), stride);
  }
  emit_motion(m, V, out, scenario);
  summary["T"] = m.frames.empty() ? json(nullptr) : json(m.frames.back().t);
  summary["status"] = m.status == movset::MotionStatus::Complete ? "complete" : "stalled";
  summary["residuals"] = {{"area_identity_rel", worst_area_identity(m, M)}};
  emit_summary(summary, out, scenario);
  return 0;
}

int run_freearc(bool symmetric, double M, double rho, const std::string& rates_arg) {
  if (symmetric == !rates_arg.empty())
    fail(Err::Config, "pass exactly one of --symmetric or --rates");
  json out;
  if (symmetric) {
    auto sol = movset::freearc::symmetric_free_arc(M, rho);
    out["M"] = sol.M;
    out["rho"] = sol.rho;
    out["ell"] = sol.ell;
    out["h"] = sol.h;
  } else {
    json p = parse_json_arg(rates_arg, "--rates");
    auto need = [&](const char* k) {
      if (!p.contains(k) || !p[k].is_number())
        fail(Err::Config, std::string("--rates: missing numeric field '") + k + "'");
      return p[k].get<double>();
    };
    auto r = movset::freearc::free_arc_rates(need("theta_star"), need("r_star"),
                                             need("omega"), need("omega_sharp"), need("M"));
    out["theta_star"] = r.theta_star;
    out["r_star"] = r.r_star;
    out["omega"] = r.omega;
    out["omega_sharp"] = r.omega_sharp;
    out["M"] = r.M;
    out["Qdot_mag"] = r.Qdot_mag;
    out["dr_dzeta"] = r.dr_dzeta;
    out["ddelta_dzeta"] = r.ddelta_dzeta;
    out["ddelta_dxi"] = r.ddelta_dxi;
    out["dr_dxi"] = r.dr_dxi;
    out["dxi_dt"] = r.dxi_dt;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_corner(double beta, double c, double M, double xdagger, int nodes,
               const OutOpts& out) {
  auto sol = movset::corner::corner_interface(beta, c, M, xdagger, nodes);
  const auto& st = sol.state;
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < st.x.size(); ++j)
    rows.push_back({st.x[j], st.phi[j], st.dphi[j], st.upsilon[j], st.t1[j], st.t2[j],
                    st.r1[j], st.r2[j]});
  const std::vector<std::string> header = {"x",  "phi", "dphi", "upsilon",
                                           "t1", "t2",  "r1",   "r2"};
  json diag;
  diag["beta"] = sol.params.beta;
  diag["c"] = sol.params.c;
  diag["effort"] = sol.params.M;
  diag["sigma"] = sol.params.sigma;
  diag["C0"] = sol.params.C0;
  diag["x_dagger"] = sol.params.x_dagger;
  diag["nodes"] = st.x.size();
  diag["iterations"] = sol.iterations;
  diag["halvings"] = sol.halvings;
  diag["final_norm_delta"] = sol.final_norm_delta;
  diag["contraction"] = sol.contraction;
  if (out.dir.empty()) {
    io::write_csv(std::cout, header, rows);
    std::cout << diag.dump(2) << "\n";
  } else {
    fs::create_directories(out.dir);
    io::write_csv(out.dir + "/corner.csv", header, rows);
    io::write_json_file(out.dir + "/corner.json", diag);
  }
  return 0;
}

struct ValidateOpts {
  std::string motion_file;
  std::string check = "admissibility";
  DomainOpts dom;
  double effort = -1;
  double kappa1 = 1.0, kappa2 = 0.0;
  bool min_time = false;
  std::string crossing;
  double tol = 1e-6;
  double tol_ang = 1e-6;
  double tol_eff = 1e-3;
};

int run_validate(const ValidateOpts& o) {
  Motion m = io::read_motion_jsonl(o.motion_file);
  const bool all = o.check == "all";
  json checks;
  json skipped = json::array();
  bool violations = false;

  if (o.check == "admissibility" || all) {
    if (o.effort > 0 && has_domain(o.dom)) {
      geom::Domain V = resolve_domain(o.dom);
      auto rep = movset::evo::admissibility_check(m, V, o.effort, o.tol_eff);
      checks["admissibility"] = {{"pairs_checked", rep.pairs_checked},
                                 {"containment_violations", rep.containment_violations},
                                 {"cleared_violations", rep.cleared_violations},
                                 {"worst_containment", rep.worst_containment},
                                 {"worst_cleared_ratio", rep.worst_cleared_ratio},
                                 {"ok", rep.ok()}};
      violations = violations || !rep.ok();
    } else if (all) {
      skipped.push_back("admissibility");
    } else {
      fail(Err::Config, "admissibility check needs --effort and a domain");
    }
  }
  if (o.check == "max-principle" || all) {
    double k1 = o.min_time ? 0.0 : o.kappa1;
    double k2 = o.min_time ? 1.0 : o.kappa2;
    if (!(k1 + k2 > 0)) fail(Err::Config, "adjoint checks need kappa1 + kappa2 > 0");
    auto rep = movset::adjoint::check_max_principle(m, k1, k2, o.tol, o.min_time);
    checks["max_principle"] = {{"windows", rep.windows},
                               {"trajectories", rep.trajectories},
                               {"active_below_max", rep.active_below_max.size()},
                               {"curvature_mismatches", rep.curvature_mismatch_times.size()},
                               {"worst_Y_gap", rep.worst_Y_gap},
                               {"worst_curvature_gap", rep.worst_curvature_gap},
                               {"note", rep.note},
                               {"ok", rep.ok()}};
    violations = violations || !rep.ok();
  }
  if (o.check == "junctions" || all) {
    if (has_domain(o.dom)) {
      geom::Domain V = resolve_domain(o.dom);
      auto rep = movset::adjoint::check_junctions(m, V, o.tol_ang);
      checks["junctions"] = {{"junctions_checked", rep.junctions_checked},
                             {"rim_contacts_checked", rep.rim_contacts_checked},
                             {"tangency_violations", rep.tangency_violations},
                             {"rim_violations", rep.rim_violations},
                             {"worst_tangency_angle", rep.worst_tangency_angle},
                             {"worst_rim_angle", rep.worst_rim_angle},
                             {"ok", rep.ok()}};
      violations = violations || !rep.ok();
    } else if (all) {
      skipped.push_back("junctions");
    } else {
      fail(Err::Config, "junction check needs a domain");
    }
  }
  if (o.check == "free-arc" || all) {
    if (!o.crossing.empty()) {
      json cj = parse_json_arg(o.crossing, "--crossing");
      movset::adjoint::FreeArcCrossing cr;
      cr.t1 = cj.value("t1", 0.0);
      cr.t2 = cj.value("t2", 0.0);
      cr.times = cj.value("times", std::vector<double>{});
      cr.omega_xi = cj.value("omega_xi", std::vector<double>{});
      cr.omega_star = cj.value("omega_star", std::vector<double>{});
      double res = movset::adjoint::check_free_arc_condition(m, cr);
      bool ok = res <= o.tol;
      checks["free_arc"] = {{"residual", res}, {"tol", o.tol}, {"ok", ok}};
      violations = violations || !ok;
    } else if (all) {
      skipped.push_back("free_arc");
    } else {
      fail(Err::Config, "free-arc check needs --crossing");
    }
  }

  json report;
  report["motion"] = o.motion_file;
  report["frames"] = m.frames.size();
  report["checks"] = std::move(checks);
  if (!skipped.empty()) report["skipped"] = std::move(skipped);
  report["violations_found"] = violations;
  std::cout << report.dump(2) << "\n";
  return violations ? 4 : 0;
}

int run_scenario(const std::string& path, const OutOpts& out_flags) {
  io::Scenario s = io::load_scenario(path);
  OutOpts out = out_flags;
  if (out.dir.empty()) out.dir = ".";
  out.svg = out.svg || s.output.svg;
  geom::Domain V = s.domain;
  double A = geom::domain_area(V);
  auto tol = [&](const char* k, double dflt) {
    auto it = s.tolerances.find(k);
    return it == s.tolerances.end() ? dflt : it->second;
  };

  std::optional<Motion> motion;
  json summary;
  summary["name"] = s.name;
  summary["solver"] = s.solver;
  summary["T"] = nullptr;
  summary["t_star"] = nullptr;
  summary["r_star"] = nullptr;
  summary["verdicts"] = json::object();
  summary["residuals"] = json::object();

  if (s.solver == "triangle") {
    auto res = movset::evo::triangle_strategy(s.effort, tol("stride", 1e-3));
    summary["t_star"] = res.t_star;
    summary["r_star"] = res.r_star;
    motion = std::move(res.motion);
    V = geom::unit_triangle();
  } else if (s.solver == "wedge") {
    const auto* poly = std::get_if<geom::ConvexPolygon>(&V);
    if (!poly) fail(Err::Config, "wedge solver needs a polygon domain");
    double K = 0;
    for (const auto& v : poly->verts) K = std::max(K, v.x());
    motion = movset::evo::wedge_strategy(K, s.effort);
  } else if (s.solver == "flow") {
    motion = movset::mintime::dido_flow(V, s.effort, tol("a0", A), tol("stride", 0));
  } else if (s.solver == "slice") {
    geom::Vec2 anchor(tol("anchor_x", 0), tol("anchor_y", 0));
    motion = movset::mintime::levelset_eradication(V, anchor, s.effort, tol("b1", 0.1),
                                                  tol("stride", 0.02));
  } else if (s.solver == "mintime") {
    auto res = movset::mintime::min_time(V, s.effort, tol("a_from", A), tol("a_to", 0));
    summary["T"] = res.T ? json(*res.T) : json(nullptr);
    summary["verdicts"]["time"] = res.finite() ? "Finite" : "Infinite";
  } else if (s.solver == "feasibility") {
    auto rep = movset::dido::eradication_verdict(V, s.effort);
    summary["verdicts"]["eradication"] = verdict_name(rep.verdict);
    summary["residuals"]["kappa"] = rep.kappa;
    summary["residuals"]["K_upper"] = rep.K_upper;
  } else {
    fail(Err::Config, "unknown solver '" + s.solver +
                          "' (expected triangle, wedge, flow, slice, mintime, feasibility)");
  }

  if (motion) {
    const Motion& m = *motion;
    summary["T"] = m.frames.empty() ? json(nullptr) : json(m.frames.back().t);
    summary["verdicts"]["status"] =
        m.status == movset::MotionStatus::Complete ? "complete" : "stalled";
    summary["residuals"]["area_identity_rel"] = worst_area_identity(m, s.effort);
    fs::create_directories(out.dir);
    if (s.output.jsonl) io::write_motion_jsonl(out.dir + "/" + s.name + ".jsonl", m);
    if (s.output.csv) {
      std::vector<std::vector<double>> rows;
      for (const auto& f : m.frames) rows.push_back({f.t, f.area, f.rel_perimeter});
      io::write_csv(out.dir + "/" + s.name + ".csv", {"t", "area", "rel_perimeter"}, rows);
    }
    if (out.svg) write_frames_svg(out.dir, s.name, V, m);
  }
  fs::create_directories(out.dir);
  io::write_json_file(out.dir + "/" + s.name + ".summary.json", summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimally controlled moving sets: strategies, bounds, validators"};
  app.require_subcommand(1);

  // dido
  auto* dido = app.add_subcommand("dido", "shortest relative cut for a prescribed area");
  DomainOpts dido_dom;
  add_domain_flags(dido, dido_dom);
  double dido_area = -1, dido_fraction = -1;
  dido->add_option("--area", dido_area, "absolute area of the cut-off region");
  dido->add_option("--area-fraction", dido_fraction, "area as a fraction of area(V)")
      ->check(CLI::Range(0.0, 1.0));

  // feasibility
  auto* feas = app.add_subcommand("feasibility", "compare the effort budget against the"
                                                 " eradication invariants");
  DomainOpts feas_dom;
  add_domain_flags(feas, feas_dom);
  double feas_M = 0;
  feas->add_option("--effort", feas_M, "clearing rate M")->required();

  // mintime (+ flow/slice)
  auto* mt = app.add_subcommand("mintime", "minimum eradication/transfer time");
  mt->require_subcommand(0, 1);
  DomainOpts mt_dom;
  add_domain_flags(mt, mt_dom);
  double mt_M = 0, mt_from = -1, mt_to = 0;
  mt->add_option("--effort", mt_M, "clearing rate M");
  mt->add_option("--from", mt_from, "initial area (default: area(V))");
  mt->add_option("--to", mt_to, "target area (default 0)");
  auto* flow = mt->add_subcommand("flow", "emit the isoperimetric-cut motion");
  DomainOpts flow_dom;
  add_domain_flags(flow, flow_dom);
  double flow_M = 0, flow_a0 = -1, flow_stride = 0;
  flow->add_option("--effort", flow_M, "clearing rate M")->required();
  flow->add_option("--a0", flow_a0, "initial area (default: area(V))");
  flow->add_option("--stride", flow_stride, "body time step (default 1e-3*area/M)");
  OutOpts flow_out;
  add_out_flags(flow, flow_out);
  auto* slice = mt->add_subcommand("slice", "emit the level-set slicing motion");
  DomainOpts slice_dom;
  add_domain_flags(slice, slice_dom);
  double slice_M = 0, slice_b1 = 0.1, slice_stride = 0.02;
  std::vector<double> slice_anchor;
  slice->add_option("--effort", slice_M, "clearing rate M")->required();
  slice->add_option("--b1", slice_b1, "rate margin b1");
  slice->add_option("--anchor", slice_anchor, "slicing center x y")->expected(2);
  slice->add_option("--stride", slice_stride, "frame time stride");
  OutOpts slice_out;
  add_out_flags(slice, slice_out);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a named clearing strategy");
  std::string sim_scenario;
  double sim_M = 0, sim_leg = 1.0, sim_radius = 1.0, sim_stride = 0;
  sim->add_option("--scenario", sim_scenario, "triangle, wedge, or disc")
      ->required()
      ->check(CLI::IsMember({"triangle", "wedge", "disc"}));
  sim->add_option("--effort", sim_M, "clearing rate M")->required();
  sim->add_option("--leg", sim_leg, "wedge leg length K");
  sim->add_option("--radius", sim_radius, "disc radius");
  sim->add_option("--stride", sim_stride, "frame stride override");
  OutOpts sim_out;
  add_out_flags(sim, sim_out);

  // freearc
  auto* fa = app.add_subcommand("freearc", "free-arc chord data and junction rates");
  bool fa_symmetric = false;
  double fa_M = 0, fa_rho = 0;
  std::string fa_rates;
  fa->add_flag("--symmetric", fa_symmetric, "solve the symmetric chord equations");
  fa->add_option("--effort", fa_M, "clearing rate M");
  fa->add_option("--rho", fa_rho, "gap curvature radius");
  fa->add_option("--rates", fa_rates,
                 "JSON with theta_star, r_star, omega, omega_sharp, M");

  // corner
  auto* co = app.add_subcommand("corner", "free interface emanating from a corner");
  double co_beta = 0, co_c = 0, co_M = 0, co_xd = 0.1;
  int co_nodes = 200;
  co->add_option("--beta", co_beta, "corner half-opening (radians)")->required();
  co->add_option("--c", co_c, "leading similarity coefficient")->required();
  co->add_option("--effort", co_M, "clearing rate M")->required();
  co->add_option("--xdagger", co_xd, "initial validity window");
  co->add_option("--max-nodes", co_nodes, "grid nodes (default 200)")
      ->check(CLI::Range(8, 100000));
  OutOpts co_out;
  add_out_flags(co, co_out);

  // validate
  auto* val = app.add_subcommand("validate", "optimality and admissibility audits of a"
                                             " stored motion");
  ValidateOpts vo;
  val->add_option("--motion", vo.motion_file, "motion JSON-lines file")->required();
  val->add_option("--check", vo.check, "admissibility, max-principle, junctions,"
                                       " free-arc, or all")
      ->check(CLI::IsMember({"admissibility", "max-principle", "junctions", "free-arc",
                             "all"}));
  add_domain_flags(val, vo.dom);
  val->add_option("--effort", vo.effort, "clearing rate M (admissibility)");
  auto* vk1 = val->add_option("--kappa1", vo.kappa1, "running-cost weight");
  auto* vk2 = val->add_option("--kappa2", vo.kappa2, "terminal-cost weight");
  auto* vmt = val->add_flag("--min-time", vo.min_time,
                            "use the minimum-time weights (0, 1)");
  vmt->excludes(vk1);
  vmt->excludes(vk2);
  val->add_option("--crossing", vo.crossing,
                  "free-arc crossing JSON: t1, t2, times, omega_xi, omega_star");
  val->add_option("--tol", vo.tol, "adjoint/free-arc tolerance");
  val->add_option("--tol-ang", vo.tol_ang, "junction angle tolerance (radians)");
  val->add_option("--tol-eff", vo.tol_eff, "admissibility effort tolerance");

  // run
  auto* run = app.add_subcommand("run", "execute a scenario file");
  std::string run_scn;
  run->add_option("scenario", run_scn, "scenario JSON file")->required();
  OutOpts run_out;
  add_out_flags(run, run_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dido) return run_dido(dido_dom, dido_area, dido_fraction);
    if (*feas) return run_feasibility(feas_dom, feas_M);
    if (*flow)
      return run_mintime_flow(has_domain(flow_dom) ? flow_dom : mt_dom, flow_M, flow_a0,
                              flow_stride, flow_out);
    if (*slice)
      return run_mintime_slice(has_domain(slice_dom) ? slice_dom : mt_dom, slice_M,
                               slice_b1, slice_anchor, slice_stride, slice_out);
    if (*mt) {
      if (mt->count("--effort") == 0) fail(Err::Config, "--effort is required");
      return run_mintime(mt_dom, mt_M, mt_from, mt_to);
    }
    if (*sim)
      return run_simulate(sim_scenario, sim_M, sim_leg, sim_radius, sim_stride, sim_out);
    if (*fa) return run_freearc(fa_symmetric, fa_M, fa_rho, fa_rates);
    if (*co) return run_corner(co_beta, co_c, co_M, co_xd, co_nodes, co_out);
    if (*val) return run_validate(vo);
    if (*run) return run_scenario(run_scn, run_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Err::Config:
      case Err::OutOfRange:
      case Err::Unsupported:
      case Err::InvalidBoundary:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
