// reinstab: command-line front end for structural-stability analysis of
// integral-controlled positive networks.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reinstab/certificates.hpp"
#include "reinstab/equilibria.hpp"
#include "reinstab/linearize.hpp"
#include "reinstab/model.hpp"
#include "reinstab/simulate.hpp"
#include "reinstab/transfer.hpp"

#ifndef REINSTAB_VERSION
#define REINSTAB_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace reinstab;

struct Common {
  std::string model_path;
  bool json_out = false;
  std::string out_path;
  std::vector<std::string> sets;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("model", c.model_path, "model document (JSON)")->required();
  cmd->add_flag("--json", c.json_out, "emit the full report as JSON on stdout");
  cmd->add_option("--out", c.out_path, "write a CSV table to this file");
  cmd->add_option("--set", c.sets, "override a scalar, key=value (repeatable)");
  cmd->add_option("--threads", c.threads, "worker threads (default: REINSTAB_THREADS or all cores)");
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw Error(ErrorCode::InvalidArgument, "cannot parse " + what + " '" + s + "'");
  return v;
}

Model load(const Common& c, json& doc) {
  doc = read_json_file(c.model_path);
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidArgument, "--set expects key=value, got '" + kv + "'");
    apply_override(doc, kv.substr(0, eq), parse_double(kv.substr(eq + 1), "value for " + kv.substr(0, eq)));
  }
  return model_from_json(doc);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------------------
// Report sections

json gains_section(const Model& m) {
  if (const auto* lin = std::get_if<LinearNetwork>(&m.plant)) {
    try {
      return to_json(static_gains(lin->a, lin->b0));
    } catch (const Error& e) {
      return {{"error", e.what()}};
    }
  }
  return nullptr;
}

json classification_section(const Model& m, const std::optional<Equilibrium>& eq) {
  std::optional<Matrix> mat;
  std::string of = "A";
  if (const auto* lin = std::get_if<LinearNetwork>(&m.plant)) {
    mat = lin->a;
  } else if (eq) {
    mat = std::get<NonlinearNetwork>(m.plant).jacobian(eq->x_star);
    of = "J(x*)";
  }
  if (!mat) return nullptr;
  const StabilityClass cls = classify(*mat);
  return {{"of", of}, {"class", to_string(cls.tag)}, {"spectral_abscissa", json_number(cls.spectral_abscissa)},
          {"marginal", cls.marginal}};
}

struct EquilibriumSection {
  json j = json::object();
  std::optional<Equilibrium> primary;
  std::vector<Equilibrium> all;
};

EquilibriumSection equilibria_section(const Model& m) {
  EquilibriumSection s;
  s.j["equilibria"] = json::array();
  try {
    const auto* lin = std::get_if<LinearNetwork>(&m.plant);
    if (const auto* p = std::get_if<PType>(&m.controller)) {
      if (lin) {
        const PTypeResult r = ptype_analysis(*lin, *p);
        s.j["admissibility"] = to_json(r.admissibility);
        s.j["u_star_candidate"] = json_number(r.u_star);
        s.primary = r.eq;
      } else {
        const NonlinearPTypeResult r = nonlinear_ptype_analysis(std::get<NonlinearNetwork>(m.plant), *p);
        s.j["admissibility"] = to_json(r.admissibility);
        if (r.inverse) s.j["F_at_zero"] = r.inverse->f_at_zero;
        s.primary = r.eq;
      }
      if (s.primary) s.all.push_back(*s.primary);
    } else if (lin) {
      if (const auto* a = std::get_if<Airc>(&m.controller)) {
        const AircEquilibrium ae = airc_equilibrium(*lin, *a);
        s.j["p1"] = ae.p1;
        s.j["p2_cross_check"] = ae.cross_check;
        s.primary = ae.eq;
        s.all.push_back(ae.eq);
      } else {
        const BranchSet set = std::holds_alternative<Exponential>(m.controller)
                                  ? exponential_equilibria(*lin, std::get<Exponential>(m.controller))
                                  : logistic_equilibria(*lin, std::get<Logistic>(m.controller));
        s.j["admissibility"] = to_json(set.positive);
        s.all = set.branches;
        if (const Equilibrium* e = set.find(BranchLabel::Positive)) s.primary = *e;
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, controller_kind(m.controller) + " controller needs a linear plant");
    }
  } catch (const Error& e) {
    s.j["error"] = e.what();
  }
  for (const Equilibrium& e : s.all) {
    json ej = to_json(e);
    try {
      ej["jacobian_abscissa"] = jacobian_at(m.plant, m.controller, e).abscissa();
    } catch (const Error& err) {
      ej["jacobian_error"] = err.what();
    }
    s.j["equilibria"].push_back(ej);
  }
  return s;
}

std::string equilibria_csv(const EquilibriumSection& s) {
  std::string out = "label,u_star,residual,state\r\n";
  for (const Equilibrium& e : s.all) {
    std::string state;
    const Vector st = e.state();
    for (Eigen::Index i = 0; i < st.size(); ++i) state += (i ? " " : "") + csv_number(st(i));
    out += std::string(to_string(e.label)) + "," + csv_number(e.u_star) + "," + csv_number(e.residual) + "," +
           csv_field(state) + "\r\n";
  }
  return out;
}

std::string hypotheses_csv(const Certificate& c) {
  std::string out = "theorem,verdict,hypothesis,passed,witness\r\n";
  for (const Hypothesis& h : c.hypotheses) {
    out += std::string(to_string(c.theorem)) + "," + to_string(c.verdict) + "," + csv_field(h.name) + "," +
           (h.passed ? "true" : "false") + "," + csv_field(h.witness.dump()) + "\r\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text output

class TextOut {
 public:
  void line(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void line(const std::string& key, double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    line(key, os.str());
  }
  void print(std::ostream& os) const {
    std::size_t w = 0;
    for (const auto& r : rows_) w = std::max(w, r.first.size());
    for (const auto& r : rows_) os << std::left << std::setw(static_cast<int>(w) + 2) << (r.first + ":") << r.second << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::string vec_text(const Vector& v) {
  std::ostringstream os;
  os << std::setprecision(8) << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(10) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

void text_equilibria(TextOut& t, const json& eqs) {
  if (eqs.contains("admissibility")) {
    const json& a = eqs["admissibility"];
    t.line("admissible", a["admissible"].get<bool>() ? "yes" : "no");
    t.line("regime", a["regime"].get<std::string>());
    t.line("admissible interval", "(" + value_text(a["lower"]) + ", " + value_text(a["upper"]) + ")");
    if (a.contains("reason")) t.line("reason", a["reason"].get<std::string>());
  }
  if (eqs.contains("error")) t.line("equilibrium error", eqs["error"].get<std::string>());
  for (const json& e : eqs["equilibria"]) {
    const std::string label = e["label"].get<std::string>();
    std::string state = e["x_star"].dump() + " / " + e["controller_state"].dump();
    t.line(label + " equilibrium", state);
    t.line(label + " u*", e["u_star"].get<double>());
    t.line(label + " residual", e["residual"].get<double>());
    if (e.contains("jacobian_abscissa")) t.line(label + " Jacobian abscissa", e["jacobian_abscissa"].get<double>());
  }
}

void text_certificate(TextOut& t, const Certificate& c) {
  t.line("theorem", to_string(c.theorem));
  for (const Hypothesis& h : c.hypotheses) t.line("hypothesis " + h.name, h.passed ? "pass" : "FAIL");
  t.line("verdict", to_string(c.verdict));
}

// ---------------------------------------------------------------------------
// Commands

struct Outcome {
  json report = json::object();
  TextOut text;
  std::string csv;
  std::string stdout_csv;  ///< printed instead of the text summary when set
  int exit_code = 0;
};

Outcome run_analyze(const Model& m, bool certify_only) {
  Outcome o;
  const EquilibriumSection eqs = equilibria_section(m);
  const Certificate cert = certify(m);
  if (!certify_only) {
    o.report["gains"] = gains_section(m);
    o.report["classification"] = classification_section(m, eqs.primary);
    o.report["equilibria"] = eqs.j;
    if (o.report["gains"].is_object() && !o.report["gains"].contains("error")) {
      const json& g = o.report["gains"];
      o.text.line("g0, g1, gn", value_text(g["g0"]) + ", " + value_text(g["g1"]) + ", " + value_text(g["gn"]));
    }
    if (o.report["classification"].is_object()) {
      o.text.line("class of " + o.report["classification"]["of"].get<std::string>(),
                  o.report["classification"]["class"].get<std::string>());
    }
    text_equilibria(o.text, eqs.j);
    o.csv = equilibria_csv(eqs);
  } else {
    o.csv = hypotheses_csv(cert);
  }
  o.report["certificate"] = to_json(cert);
  text_certificate(o.text, cert);
  o.exit_code = cert.certified() ? 0 : 2;
  return o;
}

Outcome run_equilibrium(const Model& m) {
  Outcome o;
  const EquilibriumSection eqs = equilibria_section(m);
  o.report["gains"] = gains_section(m);
  o.report["equilibria"] = eqs.j;
  text_equilibria(o.text, eqs.j);
  o.csv = equilibria_csv(eqs);
  if (eqs.j.contains("error")) throw Error(ErrorCode::InvalidArgument, eqs.j["error"].get<std::string>());
  return o;
}

void pr_text(TextOut& t, const std::string& prefix, const PRClass& pr) {
  t.line(prefix + "tag", to_string(pr.tag));
  const json j = to_json(pr);
  for (const auto& [k, v] : j["conditions"].items()) t.line(prefix + k, v.get<bool>() ? "yes" : "no");
  t.line(prefix + "delta", value_text(j["delta"]));
}

std::string pr_csv(const std::string& which, const PRClass& pr) {
  std::string out;
  const json j = to_json(pr);
  out += which + ",tag," + to_string(pr.tag) + "\r\n";
  for (const auto& [k, v] : j["conditions"].items()) out += which + "," + k + "," + (v.get<bool>() ? "true" : "false") + "\r\n";
  return out;
}

Outcome run_spr(const Model& m) {
  Outcome o;
  o.csv = "transfer,condition,value\r\n";
  const PointAnalysis pa = analyze_point(m);
  Matrix a_bar;
  std::string of;
  if (pa.eq) {
    a_bar = jacobian_at(m.plant, m.controller, *pa.eq).plant_block();
    of = "Abar at the equilibrium";
  } else if (const auto* lin = std::get_if<LinearNetwork>(&m.plant)) {
    a_bar = lin->a;
    of = "A (no admissible equilibrium)";
  } else {
    throw Error(ErrorCode::InadmissibleSetPoint, pa.error.empty() ? "no admissible equilibrium" : pa.error);
  }
  const PRClass hn = classify_pr(output_transfer(a_bar));
  o.report["h_n"] = to_json(hn);
  o.report["h_n"]["of"] = of;
  o.text.line("H_n built on", of);
  pr_text(o.text, "", hn);
  o.csv += pr_csv("h_n", hn);
  const auto* lin = std::get_if<LinearNetwork>(&m.plant);
  const auto* p = std::get_if<PType>(&m.controller);
  if (lin && p && pa.eq) {
    PType probe = *p;
    const LoopTransfer lt = loop_transfer(lin->a, lin->b0, probe);
    const PRClass g = classify_pr(lt.g_eta);
    o.report["loop_transfer"] = to_json(g);
    o.report["loop_transfer"]["eta"] = probe.eta;
    pr_text(o.text, "loop transfer ", g);
    o.csv += pr_csv("loop_transfer", g);
  }
  return o;
}

Outcome run_simulate(const Model& m, double t_end, double tol, const std::string& x0_text) {
  Outcome o;
  const ClosedLoop loop(m.plant, m.controller);
  Vector x0 = default_initial_state(loop);
  if (!x0_text.empty()) {
    std::vector<double> vals;
    std::stringstream ss(x0_text);
    for (std::string item; std::getline(ss, item, ',');) vals.push_back(parse_double(item, "x0 entry"));
    const auto k = static_cast<Eigen::Index>(vals.size());
    if (k == loop.plant_dim()) {
      for (Eigen::Index i = 0; i < k; ++i) x0(i) = vals[static_cast<std::size_t>(i)];
    } else if (k == loop.dim()) {
      x0 = Eigen::Map<Vector>(vals.data(), k);
    } else {
      throw Error(ErrorCode::DimensionMismatch, "--x0 needs " + std::to_string(loop.plant_dim()) + " or " +
                                                    std::to_string(loop.dim()) + " entries");
    }
  }
  IntegrateOptions opt;
  opt.t_end = t_end;
  opt.rtol = tol;
  const Trajectory tr = integrate(loop, x0, opt);
  const SettlingReport st = settling(tr, loop.plant_dim() - 1, set_point(m.controller));
  const std::vector<std::string> names = state_names(loop);
  o.report["simulation"] = {{"x0", to_json(x0)},
                            {"t_end", t_end},
                            {"tol", tol},
                            {"final_state", to_json(tr.back())},
                            {"settling", to_json(st)},
                            {"stats", to_json(tr.stats)},
                            {"samples", tr.size()},
                            {"min_entry", json_number(tr.min_entry)}};
  if (controller_states(m.controller) == 2) o.report["simulation"]["identity_error"] = antithetic_identity_error(tr, loop);
  o.text.line("x0", vec_text(x0));
  o.text.line("final state", vec_text(tr.back()));
  o.text.line("set-point", set_point(m.controller));
  o.text.line("settled", st.settled ? "yes" : "no");
  if (st.settled) o.text.line("settling time", st.settling_time);
  o.text.line("steady-state error", st.steady_state_error);
  o.text.line("accepted / rejected steps", std::to_string(tr.stats.accepted) + " / " + std::to_string(tr.stats.rejected));
  o.csv = to_csv(tr, names);
  return o;
}

Outcome run_sweep(const Model& m, const std::vector<std::string>& axes_text, bool simulate, double t_end, double tol,
                  unsigned threads) {
  Outcome o;
  if (axes_text.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one --axis");
  std::vector<SweepAxis> axes;
  for (const std::string& a : axes_text) axes.push_back(parse_axis(a));
  SweepOptions opt;
  opt.simulate = simulate;
  opt.integration.t_end = t_end;
  opt.integration.rtol = tol;
  opt.threads = threads;
  const SweepResult res = sweep(m, axes, opt);
  std::size_t certified = 0, negative = 0, errors = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const SweepCell& c : res.cells) {
    certified += c.verdict == "StructurallyStable";
    negative += c.abscissa < 0.0;
    errors += !c.error.empty();
    if (std::isfinite(c.abscissa)) worst = std::max(worst, c.abscissa);
  }
  o.report["sweep"] = to_json(res);
  o.report["sweep"]["summary"] = {{"cells", res.cells.size()},
                                  {"certified", certified},
                                  {"negative_abscissa", negative},
                                  {"errors", errors},
                                  {"max_abscissa", json_number(worst)}};
  o.text.line("cells", static_cast<double>(res.cells.size()));
  o.text.line("certified", static_cast<double>(certified));
  o.text.line("negative abscissa", static_cast<double>(negative));
  o.text.line("cells with errors", static_cast<double>(errors));
  o.text.line("max abscissa", worst);
  o.csv = to_csv(res);
  o.stdout_csv = o.csv;
  return o;
}

Outcome run_switching(const Model& m, const std::string& eta_text, double t_end, double tol, unsigned threads) {
  Outcome o;
  const auto* lin = std::get_if<LinearNetwork>(&m.plant);
  const auto* a = std::get_if<Airc>(&m.controller);
  if (!lin || !a) throw Error(ErrorCode::InvalidArgument, "switching needs a linear plant with an airc controller");
  const SweepAxis grid = parse_axis("eta=" + eta_text);
  IntegrateOptions opt;
  opt.t_end = t_end;
  opt.rtol = tol;
  const SwitchingExperiment ex = switching_experiment(*lin, *a, grid.values, opt, threads);
  o.report["switching"] = to_json(ex);
  o.csv = to_csv(ex);
  std::ostringstream os;
  os << "regime " << to_string(ex.table.regime) << ", u* = " << ex.table.u_star << ", limit (z1, z2) = ("
     << ex.table.z1_limit << ", " << ex.table.z2_limit << ")\n";
  os << std::setw(12) << "eta" << std::setw(16) << "z1" << std::setw(16) << "z2" << std::setw(16) << "z1 pred"
     << std::setw(16) << "z2 pred" << std::setw(16) << "eta z1 z2" << std::setw(10) << "settled" << "\n";
  os << std::setprecision(6);
  for (std::size_t i = 0; i < ex.table.rows.size(); ++i) {
    const SwitchingRow& r = ex.table.rows[i];
    const SwitchingSimulation& s = ex.runs[i];
    os << std::setw(12) << r.eta << std::setw(16) << r.z1 << std::setw(16) << r.z2 << std::setw(16) << r.z1_predicted
       << std::setw(16) << r.z2_predicted << std::setw(16) << r.product << std::setw(10)
       << (s.simulated ? (s.settled ? "yes" : "no") : "-") << "\n";
  }
  o.stdout_csv = os.str();
  return o;
}

int emit_error(const std::string& code, const std::string& message, const std::string& path = {}) {
  json e = {{"code", code}, {"message", message}};
  if (!path.empty()) e["path"] = path;
  std::cerr << json{{"error", e}}.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural stability analysis for integral-controlled positive networks"};
  app.set_version_flag("--version", std::string(REINSTAB_VERSION));
  app.require_subcommand(1);

  Common common;
  double t_end = 200.0, tol = 1e-6;
  std::string x0_text, eta_text = "1e0:1e6:7log";
  std::vector<std::string> axes;
  bool simulate_cells = false;

  CLI::App* analyze = app.add_subcommand("analyze", "classify, gains, equilibria and certificate");
  CLI::App* equilibrium = app.add_subcommand("equilibrium", "closed-loop equilibria and admissibility");
  CLI::App* spr = app.add_subcommand("spr", "positive-realness classification");
  CLI::App* certify_cmd = app.add_subcommand("certify", "structural-stability certificate");
  CLI::App* simulate = app.add_subcommand("simulate", "integrate the closed loop");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
  CLI::App* switching = app.add_subcommand("switching", "AIRC large-eta switching experiment");
  for (CLI::App* cmd : {analyze, equilibrium, spr, certify_cmd, simulate, sweep_cmd, switching}) add_common(cmd, common);
  for (CLI::App* cmd : {simulate, sweep_cmd, switching}) {
    cmd->add_option("--t-end", t_end, "integration horizon");
    cmd->add_option("--tol", tol, "relative tolerance");
  }
  simulate->add_option("--x0", x0_text, "comma-separated initial state (plant only or full)");
  sweep_cmd->add_option("--axis", axes, "name=lo:hi:count or name=lo:hi:countlog (repeatable)")->required();
  sweep_cmd->add_flag("--simulate", simulate_cells, "also simulate every cell with a negative abscissa");
  switching->add_option("--eta", eta_text, "eta grid lo:hi:count[log]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    return emit_error("UsageError", e.what());
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    json doc;
    const Model model = load(common, doc);
    Outcome o;
    std::string command;
    if (analyze->parsed()) {
      command = "analyze";
      o = run_analyze(model, false);
    } else if (certify_cmd->parsed()) {
      command = "certify";
      o = run_analyze(model, true);
    } else if (equilibrium->parsed()) {
      command = "equilibrium";
      o = run_equilibrium(model);
    } else if (spr->parsed()) {
      command = "spr";
      o = run_spr(model);
    } else if (simulate->parsed()) {
      command = "simulate";
      o = run_simulate(model, t_end, tol, x0_text);
    } else if (sweep_cmd->parsed()) {
      command = "sweep";
      o = run_sweep(model, axes, simulate_cells, t_end, tol, common.threads);
    } else {
      command = "switching";
      o = run_switching(model, eta_text, t_end, tol, common.threads);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!common.out_path.empty()) write_file(common.out_path, o.csv);

    json report = {{"tool", {{"name", "reinstab"}, {"version", REINSTAB_VERSION}}},
                   {"command", command},
                   {"model", serialize(model)},
                   {"exit_code", o.exit_code},
                   {"wall_clock_seconds", wall}};
    report.update(o.report);
    if (common.json_out) {
      std::cout << report.dump(2) << "\n";
    } else if (!o.stdout_csv.empty() && common.out_path.empty()) {
      std::cout << o.stdout_csv;
    } else {
      std::cout << "model: " << (model.name.empty() ? common.model_path : model.name) << "\n";
      o.text.print(std::cout);
    }
    return o.exit_code;
  } catch (const Error& e) {
    return emit_error(std::string(to_string(e.code())), e.what(), e.path());
  } catch (const std::exception& e) {
    return emit_error("InternalError", e.what());
  }
}
