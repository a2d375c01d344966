#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "phasetraffic/campaign.hpp"
#include "phasetraffic/cli.hpp"
#include "phasetraffic/config.hpp"
#include "phasetraffic/constrained.hpp"
#include "phasetraffic/riemann.hpp"
#include "phasetraffic/wft.hpp"

namespace py = pybind11;
using namespace phasetraffic;

namespace {

using Pair = std::pair<double, double>;

State st(const Pair& p) { return {p.first, p.second}; }
Pair tup(const State& u) { return {u.rho, u.q}; }

Model make_model(const std::string& variant, double a, double sigma, double gamma, double V_f,
                 std::optional<double> V_c, double R, double w_minus, double w_plus) {
  ModelParams p;
  if (variant == "PTa")
    p.variant = PTa{a, sigma};
  else if (variant == "PTp")
    p.variant = PTp{PressureLaw::power(gamma)};
  else
    throw ConfigError("variant must be PTa or PTp");
  p.V_f = V_f;
  p.V_c = V_c.value_or(V_f);
  p.R = R;
  p.w_minus = w_minus;
  p.w_plus = w_plus;
  return Model(p);
}

py::list waves(const WaveFan& fan) {
  py::list out;
  for (const auto& w : fan.waves) {
    py::dict d;
    d["kind"] = to_string(w.kind);
    d["left"] = tup(w.left);
    d["right"] = tup(w.right);
    d["speed_lo"] = w.speed_lo;
    d["speed_hi"] = w.speed_hi;
    out.append(d);
  }
  return out;
}

py::dict trace_dict(const wft::SimTrace& tr) {
  py::dict d;
  py::list ev;
  for (const auto& e : tr.events) {
    py::dict x;
    x["t"] = e.t;
    x["x"] = e.x;
    x["kind"] = e.kind;
    x["label"] = e.label;
    x["in_ids"] = e.in_ids;
    x["out_ids"] = e.out_ids;
    ev.append(x);
  }
  d["events"] = ev;
  py::dict labels;
  for (const auto& [k, i] : tr.labels) labels[py::str(k)] = Pair{tr.events[i].t, tr.events[i].x};
  d["labels"] = labels;
  d["gate_outflow"] = tr.gate_outflow;
  d["mass_drift"] = tr.mass_drift();
  d["max_fronts"] = tr.max_fronts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "two-phase traffic models: Riemann solvers, front tracking, analysis";

  py::register_exception<Error>(mod, "PhaseTrafficError", PyExc_RuntimeError);

  py::class_<Model>(mod, "Model")
      .def(py::init(&make_model), py::arg("variant") = "PTa", py::arg("a") = 0.0, py::arg("sigma") = 0.3,
           py::arg("gamma") = 2.0, py::arg("V_f") = 1.0, py::arg("V_c") = py::none(), py::arg("R") = 1.0,
           py::arg("w_minus") = -0.4, py::arg("w_plus") = 0.4)
      .def_property_readonly("intersecting", &Model::intersecting)
      .def("flux", [](const Model& m, Pair u) { return m.flux(st(u)); })
      .def("velocity", [](const Model& m, Pair u) { return m.velocity(st(u)); })
      .def("marker", [](const Model& m, Pair u) { return m.marker(st(u)); })
      .def("classify", [](const Model& m, Pair u) { return to_string(m.classify(st(u))); })
      .def("free_state", [](const Model& m, double rho) { return tup(m.free_state(rho)); })
      .def("u_c_minus", [](const Model& m) { return tup(m.u_c_minus()); })
      .def("u_c_plus", [](const Model& m) { return tup(m.u_c_plus()); });

  py::class_<WaveFan>(mod, "WaveFan")
      .def_property_readonly("waves", &waves)
      .def("serialize", [](const WaveFan& f) { return serialize(f); })
      .def("__len__", [](const WaveFan& f) { return f.waves.size(); });

  mod.def("solve", [](const Model& m, Pair ul, Pair ur) { return solve(m, st(ul), st(ur)); }, py::arg("model"),
          py::arg("u_l"), py::arg("u_r"));

  mod.def("evaluate", [](const Model& m, const WaveFan& f, double xi) { return tup(eval(m, f, xi)); });

  mod.def(
      "solve_constrained",
      [](const Model& m, double F, Pair ul, Pair ur) {
        ConstrainedSplit s = solve_constrained(m, F, st(ul), st(ur));
        py::dict d;
        d["region"] = s.region == Region::D1 ? "D1" : "D2";
        d["u_hat"] = tup(s.u_hat);
        d["u_check"] = tup(s.u_check);
        d["fan"] = s.fan;
        return d;
      },
      py::arg("model"), py::arg("F"), py::arg("u_l"), py::arg("u_r"));

  mod.def(
      "simulate",
      [](const std::string& json_text, std::optional<double> delta_v) {
        auto c = config::parse(json_text);
        if (delta_v && c.simulation) c.simulation->delta_v = *delta_v;
        Model m(c.model);
        auto sc = config::to_sim_config(m, c);
        wft::SimTrace tr;
        {
          py::gil_scoped_release nogil;
          tr = wft::run(m, sc);
        }
        return trace_dict(tr);
      },
      py::arg("config_json"), py::arg("delta_v") = py::none());

  mod.def(
      "analyze",
      [](const Model& m, double F, std::vector<std::string> suites, std::size_t samples, std::size_t probe_pairs,
         std::uint64_t seed) {
        campaign::Options o;
        if (!suites.empty()) o.suites = std::move(suites);
        o.samples = samples;
        o.probe_pairs = probe_pairs;
        o.seed = seed;
        campaign::Result r;
        {
          py::gil_scoped_release nogil;
          r = campaign::run(m, F, o);
        }
        py::dict d;
        d["all_pass"] = r.all_pass();
        d["text"] = r.text();
        d["csv"] = r.csv();
        return d;
      },
      py::arg("model"), py::arg("F"), py::arg("suites") = std::vector<std::string>{}, py::arg("samples") = 200,
      py::arg("probe_pairs") = 20, py::arg("seed") = 1);

  mod.def(
      "run_cli",
      [](std::vector<std::string> args) {
        std::vector<const char*> argv{"phasetraffic"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
