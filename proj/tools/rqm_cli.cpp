// rqm: entropic fluctuation toolkit for repeated quantum measurement processes.
//
// Thin wrappers over the library; every emitted number comes from a module
// operation. Usage errors exit 2, numerical/cap errors exit 1 with a JSON
// diagnostic on stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rqm/reversal.hpp"
#include "rqm/scenario.hpp"

using rqm::io::json;

namespace {

struct Common {
  std::string source;
  std::uint64_t cap = 1ull << 21;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::string output;  // "-" = stdout
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("source", c.source, "instrument JSON file or builtin:name(args)")->required();
  cmd->add_option("--cap", c.cap, "word-enumeration cap");
  cmd->add_option("--seed", c.seed, "rng seed");
  cmd->add_option("--tol", c.tol, "tolerance override");
  cmd->add_option("-o,--output", c.output, "output file (default stdout)");
}

void write_out(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw rqm::Error("cannot write " + c.output);
  out << text;
}

std::vector<int> t_range(int lo, int hi) {
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t) out.push_back(t);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropic fluctuation analysis of repeated quantum measurement processes"};
  app.require_subcommand(1);

  Common c;
  int T = 6, T_lo = 1, T_hi = 6;
  double alpha = 0.5, eps = 0.1, o_lo = -0.1, o_hi = 0.1;
  int n_samples = 1, tau_max = 2, word_len_max = 3;

  auto* validate = app.add_subcommand("validate", "validate an instrument and report spectra");
  add_common(validate, c);

  auto* reverse = app.add_subcommand("reverse", "construct and verify the outcome reversal");
  add_common(reverse, c);
  reverse->add_option("-T", T, "verify up to this horizon");

  auto* ep = app.add_subcommand("ep", "entropy production bounds");
  add_common(ep, c);
  ep->add_option("-T", T, "enumerate E[sigma_T] up to this horizon");

  auto* pressure = app.add_subcommand("pressure", "Renyi pressures with bracket envelopes");
  add_common(pressure, c);
  pressure->add_option("--alpha", alpha, "single alpha (otherwise the default grid)");
  bool single_alpha = false;
  pressure->add_flag("--single", single_alpha, "only the --alpha point");
  pressure->add_option("--T-lo", T_lo);
  pressure->add_option("--T-hi", T_hi);

  auto* ldp = app.add_subcommand("ldp", "rate function and empirical LDP check");
  add_common(ldp, c);
  ldp->add_option("--T-lo", T_lo);
  ldp->add_option("--T-hi", T_hi);
  ldp->add_option("--o-lo", o_lo, "interval O lower end");
  ldp->add_option("--o-hi", o_hi, "interval O upper end");

  auto* hypo = app.add_subcommand("hypotest", "NP / Chernoff / Stein / Hoeffding report");
  add_common(hypo, c);
  hypo->add_option("--epsilon", eps, "Stein type-I budget");
  hypo->add_option("--T-lo", T_lo);
  hypo->add_option("--T-hi", T_hi);

  auto* assume = app.add_subcommand("assumptions", "certify Assumptions (A)-(D)");
  add_common(assume, c);
  assume->add_option("-T", T, "support-check horizon");
  assume->add_option("--tau-max", tau_max);
  assume->add_option("--word-len-max", word_len_max);

  auto* sample = app.add_subcommand("sample", "stream sampled trajectories as JSON lines");
  add_common(sample, c);
  sample->add_option("-T", T, "trajectory length");
  sample->add_option("-n", n_samples, "number of trajectories");

  auto* runcmd = app.add_subcommand("run", "run a scenario config");
  std::string config_path, out_dir = ".";
  runcmd->add_option("config", config_path, "scenario JSON config")->required();
  runcmd->add_option("-d,--output-dir", out_dir, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*runcmd) {
      std::ifstream in(config_path);
      if (!in) throw rqm::Error("cannot open config: " + config_path);
      json cfg;
      in >> cfg;
      const auto manifest = rqm::run_scenario(cfg, out_dir);
      std::cout << manifest.to_json().dump(2) << "\n";
      return 0;
    }

    rqm::Process p = rqm::io::resolve_process_source(c.source);

    if (*validate) {
      const auto rep = rqm::validate(p.instrument, rqm::Tolerances{});
      json j = rqm::io::validation_to_json(rep);
      j["spectral"] = rqm::io::spectral_to_json(rqm::spectral_report(p.instrument.total()));
      j["lambda0"] = p.lambda0;
      write_out(c, j.dump(2) + "\n");
      return rep.valid ? 0 : 1;
    }
    if (*reverse) {
      const rqm::Process& q = p.or_process();
      const auto ver = rqm::verify_or(p, q, std::min(T, 6), c.tol, c.cap);
      json j = rqm::io::instrument_to_json(q.instrument);
      j["verification"] = {{"passed", ver.passed},
                           {"T_checked", ver.T_checked},
                           {"max_defect", ver.max_defect}};
      write_out(c, j.dump(2) + "\n");
      return ver.passed ? 0 : 1;
    }
    if (*ep) {
      const auto rep = rqm::ep_bounds(p, T, c.cap);
      json j;
      j["T"] = rep.T_values;
      j["rate"] = rep.rate_seq;
      j["lower"] = rep.lower_seq;
      j["ep_lower"] = rep.ep_lower;
      if (rep.ceiling) j["ceiling"] = *rep.ceiling;
      j["b_violated"] = rep.b_violated;
      write_out(c, j.dump(2) + "\n");
      return 0;
    }
    if (*pressure) {
      const auto cc = rqm::estimate_C_constants(p, tau_max, word_len_max, c.cap);
      std::optional<double> cconst;
      if (rqm::check_C(p).status == rqm::Status::Certified && cc.tau >= 0) cconst = cc.c;
      const auto grid = single_alpha ? std::vector<double>{alpha}
                                     : rqm::default_alpha_grid(true);
      const auto curve = rqm::pressure_curve(p, grid, t_range(T_lo, T_hi), cconst, c.cap);
      std::ostringstream os;
      rqm::io::write_pressure_csv(os, curve);
      write_out(c, os.str());
      return 0;
    }
    if (*ldp || *hypo) {
      json cfg;
      cfg["instrument"] = c.source;
      cfg["cap"] = c.cap;
      cfg["rng_seed"] = c.seed;
      cfg["tasks"]["assumptions"] = {{"tau_max", tau_max}, {"word_len_max", word_len_max}};
      cfg["tasks"]["ep"] = {{"T_max", std::min(T_hi, 8)}};
      cfg["tasks"]["pressure"] = {{"T_range", {T_lo, T_hi}}};
      if (*ldp) cfg["tasks"]["ldp"] = {{"O", {o_lo, o_hi}}, {"T_range", {T_lo, T_hi}}};
      if (*hypo) cfg["tasks"]["hypotest"] = {{"eps", eps}, {"T_range", {T_lo, T_hi}}};
      const auto manifest = rqm::run_scenario(cfg, c.output.empty() ? "." : c.output);
      std::cout << manifest.to_json().dump(2) << "\n";
      return 0;
    }
    if (*assume) {
      json bundle;
      bundle["A"] = rqm::io::certificate_to_json(rqm::check_A(p));
      bundle["B"] = rqm::io::certificate_to_json(rqm::check_B(p, T, c.cap));
      bundle["C"] = rqm::io::certificate_to_json(rqm::check_C(p));
      bundle["D"] = rqm::io::certificate_to_json(rqm::check_D(p, word_len_max, c.cap));
      const auto cc = rqm::estimate_C_constants(p, tau_max, word_len_max, c.cap);
      bundle["C_constants"] = {{"tau", cc.tau}, {"C_tau", cc.C_tau}, {"c", cc.c},
                               {"per_tau", cc.per_tau}};
      const auto erg = rqm::ergodicity_report(p);
      bundle["ergodicity"] = {{"ergodic", erg.ergodic}, {"mixing", erg.mixing}, {"gap", erg.gap == rqm::kPosInf ? json("inf") : json(erg.gap)}};
      write_out(c, bundle.dump(2) + "\n");
      return 0;
    }
    if (*sample) {
      std::ostringstream os;
      for (int i = 0; i < n_samples; ++i) {
        const auto tr = rqm::sample_trajectory(p, T, c.seed + i);
        os << rqm::io::trajectory_to_json(tr, p.instrument.alphabet).dump() << "\n";
      }
      write_out(c, os.str());
      return 0;
    }
  } catch (const rqm::CapExceeded& e) {
    json j = {{"error", "cap_exceeded"}, {"required", e.required}, {"cap", e.cap}};
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    json j = {{"error", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return 2;
}
