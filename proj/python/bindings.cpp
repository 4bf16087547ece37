#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rqm/scenario.hpp"

namespace py = pybind11;
using namespace rqm;

namespace {

py::object to_py(const io::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

io::json to_json(const py::object& o) {
  return io::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict ep_bounds_dict(const EpBoundsReport& rep) {
  py::dict d;
  d["T_values"] = rep.T_values;
  d["mean_sigma"] = rep.mean_sigma_seq;
  d["rate"] = rep.rate_seq;
  d["lower"] = rep.lower_seq;
  d["ep_lower"] = rep.ep_lower;
  if (rep.ceiling) d["ceiling"] = *rep.ceiling;
  d["b_violated"] = rep.b_violated;
  return d;
}

py::dict law_dict(const SigmaLaw& law) {
  py::dict d;
  d["T"] = law.T;
  py::list atoms;
  for (const SigmaAtom& a : law.atoms) {
    py::dict e;
    e["s"] = a.s;
    e["mass_p"] = a.mass_p;
    e["mass_p_hat"] = a.mass_p_hat;
    atoms.append(e);
  }
  d["atoms"] = atoms;
  d["mass_p_at_plus_inf"] = law.mass_p_at_plus_inf;
  d["mass_p_hat_at_minus_inf"] = law.mass_p_hat_at_minus_inf;
  d["fr_defect"] = check_fluctuation_relation(law);
  return d;
}

}  // namespace

PYBIND11_MODULE(_rqm, m) {
  m.doc() = "entropic fluctuations of repeated quantum measurement processes";
  m.attr("__version__") = kLibraryVersion;

  // later registrations are matched first, so the derived type goes second
  py::register_exception<Error>(m, "RqmError");
  py::register_exception<CapExceeded>(m, "CapExceededError");

  py::class_<Process>(m, "Process")
      .def_property_readonly("dim", &Process::dim)
      .def_property_readonly("num_letters", &Process::num_letters)
      .def_property_readonly("alphabet",
                             [](const Process& p) { return p.instrument.alphabet; })
      .def_property_readonly("lambda0", [](const Process& p) { return p.lambda0; })
      .def("validate", [](const Process& p) { return to_py(io::validation_to_json(validate(p.instrument))); })
      .def("__repr__", [](const Process& p) {
        return "<Process d=" + std::to_string(p.dim()) +
               " letters=" + std::to_string(p.num_letters()) + ">";
      });

  py::class_<PathTable>(m, "PathTable")
      .def_readonly("T", &PathTable::T)
      .def_readonly("ell", &PathTable::ell)
      .def_readonly("log_p", &PathTable::log_p)
      .def_readonly("log_p_hat", &PathTable::log_p_hat)
      .def("size", &PathTable::size)
      .def("word_at", &PathTable::word_at)
      .def("index_of", &PathTable::index_of)
      .def("sigma_at", [](const PathTable& t, std::uint64_t i) { return sigma_at(t, i); });

  py::class_<PressureCurve>(m, "PressureCurve")
      .def_readonly("alpha_grid", &PressureCurve::alpha_grid)
      .def_readonly("T_values", &PressureCurve::T_values)
      .def_readonly("e_T", &PressureCurve::e_T)
      .def_readonly("upper", &PressureCurve::upper)
      .def_readonly("lower", &PressureCurve::lower)
      .def_readonly("lower_certified", &PressureCurve::lower_certified)
      .def_readonly("bracket_width", &PressureCurve::bracket_width);

  m.def("bernoulli", &bernoulli, py::arg("p"));
  m.def("cycle_chain", &cycle_chain, py::arg("n"), py::arg("q"));
  m.def("load_process", &io::load_process, py::arg("path"));
  m.def("save_process", &io::save_process, py::arg("process"), py::arg("path"));
  m.def("from_source", &io::resolve_process_source, py::arg("source"),
        "builtin:bernoulli(p) | builtin:cycle(n,q) | file path");

  m.def("log_prob",
        [](const Process& p, const Word& w, bool reversed) {
          return log_prob(p, w, reversed ? Which::Reversed : Which::Forward);
        },
        py::arg("process"), py::arg("word"), py::arg("reversed") = false);
  m.def("enumerate_table", &enumerate_table, py::arg("process"), py::arg("T"),
        py::arg("cap") = (1ull << 21));
  m.def("sample_trajectory",
        [](const Process& p, int T, std::uint64_t seed) {
          return to_py(io::trajectory_to_json(sample_trajectory(p, T, seed),
                                              p.instrument.alphabet));
        },
        py::arg("process"), py::arg("T"), py::arg("seed"));

  m.def("mean_sigma",
        [](const Process& p, int T, std::uint64_t cap) { return mean_sigma(p, T, cap).mean_sigma; },
        py::arg("process"), py::arg("T"), py::arg("cap") = (1ull << 21));
  m.def("ep_bounds",
        [](const Process& p, int T_max, std::uint64_t cap) {
          return ep_bounds_dict(ep_bounds(p, T_max, cap));
        },
        py::arg("process"), py::arg("T_max"), py::arg("cap") = (1ull << 21));
  m.def("ep_monte_carlo",
        [](const Process& p, int T, int n, std::uint64_t seed) {
          const auto e = ep_monte_carlo(p, T, n, seed);
          py::dict d;
          d["mean"] = e.mean;
          d["std_error"] = e.std_error;
          d["ci"] = py::make_tuple(e.ci_lo, e.ci_hi);
          d["ergodic_warning"] = e.ergodic_warning;
          return d;
        },
        py::arg("process"), py::arg("T"), py::arg("n"), py::arg("seed"));

  m.def("renyi_pressure",
        [](const Process& p, double alpha, int T, std::uint64_t cap) {
          return renyi_pressure(p, alpha, T, cap);
        },
        py::arg("process"), py::arg("alpha"), py::arg("T"), py::arg("cap") = (1ull << 21));
  m.def("default_alpha_grid", &default_alpha_grid, py::arg("hoeffding_refinement") = false);
  m.def("pressure_curve",
        [](const Process& p, const std::vector<double>& grid, const std::vector<int>& Ts,
           std::optional<double> c, std::uint64_t cap) {
          return pressure_curve(p, grid, Ts, c, cap);
        },
        py::arg("process"), py::arg("alpha_grid"), py::arg("T_values"),
        py::arg("c_constant") = py::none(), py::arg("cap") = (1ull << 21));

  m.def("sigma_law",
        [](const Process& p, int T, std::uint64_t cap) { return law_dict(sigma_law(p, T, cap)); },
        py::arg("process"), py::arg("T"), py::arg("cap") = (1ull << 21));
  m.def("jarzynski",
        [](const Process& p, int T, std::uint64_t cap) {
          const auto rep = check_jarzynski(p, T, cap);
          py::dict d;
          d["identity_defect"] = rep.identity_defect;
          d["inequality_value"] = rep.inequality_value;
          d["support_flag"] = rep.support_flag;
          return d;
        },
        py::arg("process"), py::arg("T"), py::arg("cap") = (1ull << 21));
  m.def("rate_function",
        [](const PressureCurve& curve, const std::vector<double>& s_grid,
           std::optional<double> ep_lower) {
          const auto rf = rate_function(curve, s_grid, ep_lower);
          py::dict d;
          d["s_grid"] = rf.s_grid;
          d["I"] = rf.I;
          d["I_err_lo"] = rf.I_err_lo;
          d["I_err_hi"] = rf.I_err_hi;
          d["validity"] = py::make_tuple(rf.validity_lo, rf.validity_hi);
          return d;
        },
        py::arg("curve"), py::arg("s_grid"), py::arg("ep_lower_bound") = py::none());

  m.def("chernoff_cT",
        [](const Process& p, int T, std::uint64_t cap) { return chernoff_cT(p, T, cap); },
        py::arg("process"), py::arg("T"), py::arg("cap") = (1ull << 21));
  m.def("stein_sT",
        [](const Process& p, int T, double eps, std::uint64_t cap) {
          return stein_sT(p, T, eps, cap).value;
        },
        py::arg("process"), py::arg("T"), py::arg("eps"), py::arg("cap") = (1ull << 21));
  m.def("hoeffding_psi",
        [](const PressureCurve& curve, const std::vector<double>& s_grid) {
          const auto h = hoeffding_psi(curve, s_grid);
          py::dict d;
          d["s_grid"] = h.s_grid;
          d["psi"] = h.psi;
          d["psi_err_lo"] = h.psi_err_lo;
          d["psi_err_hi"] = h.psi_err_hi;
          return d;
        },
        py::arg("curve"), py::arg("s_grid"));

  m.def("check_A", [](const Process& p) { return to_py(io::certificate_to_json(check_A(p))); });
  m.def("check_B",
        [](const Process& p, int T_max, std::uint64_t cap) {
          return to_py(io::certificate_to_json(check_B(p, T_max, cap)));
        },
        py::arg("process"), py::arg("T_max"), py::arg("cap") = (1ull << 21));
  m.def("check_C", [](const Process& p) { return to_py(io::certificate_to_json(check_C(p))); });
  m.def("check_D",
        [](const Process& p, int word_len_max, std::uint64_t cap) {
          return to_py(io::certificate_to_json(check_D(p, word_len_max, cap)));
        },
        py::arg("process"), py::arg("word_len_max"), py::arg("cap") = (1ull << 21));
  m.def("estimate_C_constants",
        [](const Process& p, int tau_max, int word_len_max, std::uint64_t cap) {
          const auto cc = estimate_C_constants(p, tau_max, word_len_max, cap);
          py::dict d;
          d["tau"] = cc.tau;
          d["C_tau"] = cc.C_tau;
          d["per_tau"] = cc.per_tau;
          d["c"] = cc.c;
          d["horizon_limited"] = cc.horizon_limited;
          return d;
        },
        py::arg("process"), py::arg("tau_max"), py::arg("word_len_max"),
        py::arg("cap") = (1ull << 21));
  m.def("ergodicity",
        [](const Process& p) {
          const auto rep = ergodicity_report(p);
          py::dict d;
          d["ergodic"] = rep.ergodic;
          d["mixing"] = rep.mixing;
          d["gap"] = rep.gap;
          return d;
        });

  m.def("run_scenario",
        [](const py::object& config, const std::string& output_dir) {
          return to_py(run_scenario(to_json(config), output_dir).to_json());
        },
        py::arg("config"), py::arg("output_dir"));
}
