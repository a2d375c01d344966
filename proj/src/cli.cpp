#include "phasetraffic/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "phasetraffic/campaign.hpp"
#include "phasetraffic/config.hpp"
#include "phasetraffic/constrained.hpp"
#include "phasetraffic/errors.hpp"
#include "phasetraffic/riemann.hpp"
#include "phasetraffic/wft.hpp"

namespace phasetraffic::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta_v;
};

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string show(const State& u) { return "(" + g17(u.rho) + ", " + g17(u.q) + ")"; }

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
  if (!f) throw Error("write failed for " + p.string());
}

fs::path prepare_dir(const config::RunConfig& c, const Flags& fl) {
  fs::path dir = fl.out ? *fl.out : c.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

Model build_model(const config::RunConfig& c) {
  try {
    return Model(c.model);
  } catch (const ModelError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

void require_capacity(const Model& m, double F) {
  try {
    check_capacity(m, F);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("constraint.F: ") + e.what());
  }
}

std::string describe(const Model& m, const WaveFan& fan) {
  std::ostringstream os;
  if (fan.waves.empty()) os << "constant solution, no waves\n";
  for (const auto& w : fan.waves) {
    os << "  " << to_string(w.kind) << "  speed ";
    if (w.is_rarefaction())
      os << "[" << g17(w.speed_lo) << ", " << g17(w.speed_hi) << "]";
    else
      os << g17(w.speed());
    os << "  " << show(w.left) << " [" << to_string(m.classify(w.left)) << "] -> " << show(w.right) << " ["
       << to_string(m.classify(w.right)) << "]\n";
  }
  return os.str();
}

int cmd_solve(const config::RunConfig& c, const Flags& fl, std::ostream& out) {
  if (!c.riemann) throw ConfigError("solve needs problem.riemann");
  Model m = build_model(c);
  State ul = config::resolve(m, c.riemann->u_l);
  State ur = config::resolve(m, c.riemann->u_r);
  if (c.F) require_capacity(m, *c.F);
  fs::path dir = prepare_dir(c, fl);

  std::ostringstream human;
  WaveFan fan;
  if (c.F) {
    ConstrainedSplit sp = solve_constrained(m, *c.F, ul, ur);
    fan = sp.fan;
    human << "constrained solve, F = " << g17(*c.F) << ", region " << (sp.region == Region::D1 ? "D1" : "D2")
          << "\n  u_hat   = " << show(sp.u_hat) << "  f = " << g17(m.flux(sp.u_hat))
          << "\n  u_check = " << show(sp.u_check) << "  f = " << g17(m.flux(sp.u_check)) << "\n";
  } else {
    fan = solve(m, ul, ur);
    human << "unconstrained solve (" << (m.intersecting() ? "R" : "S") << ")\n";
  }
  human << describe(m, fan);
  std::string record = serialize(fan);
  out << record << human.str();
  if (c.output.wants("txt")) write_file(dir / "fan.txt", record);
  return 0;
}

std::string gate_csv(const wft::SimTrace& tr) {
  std::ostringstream os;
  os << "t,flux_minus,flux_plus\n";
  for (const auto& g : tr.gate_flux) os << g17(g.t) << ',' << g17(g.flux_minus) << ',' << g17(g.flux_plus) << '\n';
  return os.str();
}

std::string mass_csv(const wft::SimTrace& tr) {
  std::ostringstream os;
  os << "t,mass,boundary_out\n";
  for (const auto& s : tr.mass) os << g17(s.t) << ',' << g17(s.mass) << ',' << g17(s.boundary_out) << '\n';
  return os.str();
}

std::string sim_summary(const wft::SimTrace& tr, const wft::SimConfig& sc) {
  std::ostringstream os;
  os << "events " << tr.events.size() << "\nmax_fronts " << tr.max_fronts << "\nmass_drift " << g17(tr.mass_drift())
     << "\n";
  if (sc.gate_F) os << "gate_F " << g17(*sc.gate_F) << "\ngate_outflow " << g17(tr.gate_outflow) << "\n";
  for (const auto& [label, idx] : tr.labels) {
    const auto& e = tr.events[idx];
    os << label << " t=" << g17(e.t) << " x=" << g17(e.x) << "\n";
  }
  return os.str();
}

void write_sim(const fs::path& dir, const config::OutputCfg& o, const wft::SimTrace& tr, const wft::SimConfig& sc) {
  if (o.wants("csv")) {
    write_file(dir / "profile.csv", wft::profile_csv(tr.profiles));
    write_file(dir / "events.csv", wft::events_csv(tr.events));
    write_file(dir / "gate_flux.csv", gate_csv(tr));
    write_file(dir / "mass.csv", mass_csv(tr));
  }
  if (o.wants("svg")) write_file(dir / "spacetime.svg", wft::spacetime_svg(tr, sc.t_end));
  if (o.wants("txt")) write_file(dir / "summary.txt", sim_summary(tr, sc));
}

int cmd_simulate(config::RunConfig c, const Flags& fl, std::ostream& out, std::ostream& err) {
  if (!c.simulation) throw ConfigError("simulate needs problem.simulation");
  if (fl.delta_v) c.simulation->delta_v = *fl.delta_v;
  Model m = build_model(c);
  if (c.F) require_capacity(m, *c.F);
  wft::SimConfig sc = config::to_sim_config(m, c);
  fs::path dir = prepare_dir(c, fl);
  try {
    wft::SimTrace tr = wft::run(m, sc);
    write_sim(dir, c.output, tr, sc);
    out << sim_summary(tr, sc);
    return 0;
  } catch (const wft::SimulationOverflow& e) {
    write_sim(dir, c.output, e.trace(), sc);
    err << "simulation aborted: " << e.what() << " (partial trace written to " << dir.string() << ")\n";
    return 1;
  }
}

int cmd_analyze(const config::RunConfig& c, const Flags& fl, std::ostream& out) {
  if (!c.F) throw ConfigError("analyze needs constraint.F");
  Model m = build_model(c);
  require_capacity(m, *c.F);
  config::AnalysisCfg a = c.analysis.value_or(config::AnalysisCfg{});
  campaign::Options o;
  o.suites = a.suites;
  o.samples = a.samples;
  o.probe_pairs = a.probe_pairs;
  o.radii = a.radii;
  o.seed = fl.seed.value_or(a.seed);
  fs::path dir = prepare_dir(c, fl);
  campaign::Result r = campaign::run(m, *c.F, o);
  if (c.output.wants("csv")) write_file(dir / "analysis.csv", r.csv());
  if (c.output.wants("txt")) write_file(dir / "summary.txt", r.text());
  out << r.text();
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-phase traffic models: Riemann solvers, front tracking, analysis campaigns"};
  app.name("phasetraffic");
  app.require_subcommand(1);

  Flags fl;
  std::string out_dir;
  std::uint64_t seed = 0;
  double dv = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", fl.config, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
  };
  auto* solve_cmd = app.add_subcommand("solve", "solve one (possibly constrained) Riemann problem");
  auto* sim_cmd = app.add_subcommand("simulate", "front-tracking simulation");
  auto* an_cmd = app.add_subcommand("analyze", "run analysis suites");
  for (auto* s : {solve_cmd, sim_cmd, an_cmd}) add_common(s);
  sim_cmd->add_option("--delta-v", dv, "rarefaction discretization step (overrides config)");
  an_cmd->add_option("--seed", seed, "sampling seed (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) fl.out = out_dir;
  if (sub->get_name() == "simulate" && sub->count("--delta-v")) {
    if (!(dv > 0)) {
      err << "error: --delta-v must be positive\n";
      return 2;
    }
    fl.delta_v = dv;
  }
  if (sub->get_name() == "analyze" && sub->count("--seed")) fl.seed = seed;

  try {
    config::RunConfig c = config::load(fl.config);
    if (sub == solve_cmd) return cmd_solve(c, fl, out);
    if (sub == sim_cmd) return cmd_simulate(c, fl, out, err);
    return cmd_analyze(c, fl, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace phasetraffic::cli
