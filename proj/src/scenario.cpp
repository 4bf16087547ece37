#include "rqm/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rqm {

using io::json;

std::string config_hash(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json ResultManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["library_version"] = library_version;
  j["outputs"] = outputs;
  j["report"] = report;
  json t = json::object();
  for (const auto& [name, ms] : timings_ms) t[name] = ms;
  j["timings_ms"] = t;
  return j;
}

namespace {

std::vector<int> parse_T_range(const json& j, const char* key, int def_lo, int def_hi) {
  int lo = def_lo, hi = def_hi;
  if (j.contains(key)) {
    lo = j[key][0].get<int>();
    hi = j[key][1].get<int>();
  }
  if (lo < 1 || hi < lo) throw Error("bad T range");
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t) out.push_back(t);
  return out;
}

struct Runner {
  const json& cfg;
  std::string dir;
  ResultManifest manifest;
  Process proc;
  std::uint64_t cap;
  std::uint64_t seed;
  std::map<int, PathTable> tables;  // write-once cache per T

  const PathTable& table(int T) {
    auto it = tables.find(T);
    if (it == tables.end()) it = tables.emplace(T, enumerate_table(proc, T, cap)).first;
    return it->second;
  }

  void emit(const std::string& name, const std::string& contents) {
    std::ofstream out(dir + "/" + name);
    if (!out) throw Error("cannot write " + dir + "/" + name);
    out << contents;
    manifest.outputs.push_back(name);
  }

  template <typename F>
  void task(const std::string& name, F&& body) {
    if (!cfg.contains("tasks") || !cfg["tasks"].contains(name)) return;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(cfg["tasks"][name]);
    } catch (const std::exception& e) {
      manifest.report[name] = {{"error", e.what()}};
    }
    const auto end = std::chrono::steady_clock::now();
    manifest.timings_ms.emplace_back(
        name, std::chrono::duration<double, std::milli>(end - start).count());
  }
};

}  // namespace

ResultManifest run_scenario(const json& config, const std::string& output_dir) {
  if (!config.contains("instrument")) throw Error("config needs an 'instrument' source");

  Runner r{config, output_dir, {}, io::resolve_process_source(config["instrument"].get<std::string>()),
           config.value("cap", std::uint64_t{1} << 21), config.value("rng_seed", std::uint64_t{0}),
           {}};
  r.manifest.config_hash = config_hash(config);
  r.manifest.library_version = kLibraryVersion;
  r.manifest.report = json::object();

  // upfront cap screening: reject tasks whose smallest T already blows the cap
  if (config.contains("tasks")) {
    const double ell = r.proc.num_letters();
    for (const auto& [name, block] : config["tasks"].items()) {
      if (!block.is_object() || !block.contains("T_range")) continue;
      const double need = std::pow(ell, block["T_range"][0].get<int>());
      if (need > static_cast<double>(r.cap))
        throw Error("task '" + name + "' needs " + io::fmt(need) + " words, above the cap");
    }
  }

  std::optional<double> c_constant;
  double ep_lb = 0;
  std::optional<double> ep_ub;

  r.task("validate", [&](const json&) {
    const auto rep = validate(r.proc.instrument);
    r.manifest.report["validate"] = io::validation_to_json(rep);
    r.manifest.report["validate"]["spectral"] = io::spectral_to_json(
        spectral_report(r.proc.instrument.total()));
  });

  r.task("assumptions", [&](const json& block) {
    const int T_max = block.value("T_max", 6);
    const int tau_max = block.value("tau_max", 2);
    const int word_len_max = block.value("word_len_max", 3);
    json bundle;
    bundle["A"] = io::certificate_to_json(check_A(r.proc));
    bundle["B"] = io::certificate_to_json(check_B(r.proc, T_max, r.cap));
    const auto cert_c = check_C(r.proc);
    bundle["C"] = io::certificate_to_json(cert_c);
    bundle["D"] = io::certificate_to_json(check_D(r.proc, word_len_max, r.cap));
    const CConstants cc = estimate_C_constants(r.proc, tau_max, word_len_max, r.cap);
    bundle["C_constants"] = {{"tau", cc.tau},
                             {"C_tau", cc.C_tau},
                             {"per_tau", cc.per_tau},
                             {"c", cc.c},
                             {"horizon_limited", cc.horizon_limited},
                             {"word_len_max", cc.word_len_max}};
    const auto erg = ergodicity_report(r.proc);
    bundle["ergodicity"] = {{"ergodic", erg.ergodic}, {"mixing", erg.mixing}, {"gap", erg.gap == kPosInf ? io::json("inf") : io::json(erg.gap)}};
    if (cert_c.status == Status::Certified && cc.tau >= 0) c_constant = cc.c;
    r.manifest.report["assumptions"] = bundle;
    r.emit("assumptions.json", bundle.dump(2) + "\n");
  });

  r.task("ep", [&](const json& block) {
    const int T_max = block.value("T_max", 6);
    const auto rep = ep_bounds(r.proc, T_max, r.cap);
    json j;
    j["T"] = rep.T_values;
    j["mean_sigma"] = json::array();
    for (double v : rep.mean_sigma_seq) j["mean_sigma"].push_back(io::fmt(v));
    j["rate"] = rep.rate_seq;
    j["lower"] = rep.lower_seq;
    j["ep_lower"] = rep.ep_lower;
    if (rep.ceiling) j["ceiling"] = *rep.ceiling;
    j["b_violated"] = rep.b_violated;
    ep_lb = rep.ep_lower;
    if (rep.ceiling) ep_ub = *rep.ceiling;
    if (block.contains("mc")) {
      const auto est = ep_monte_carlo(r.proc, block["mc"].value("T", 200),
                                      block["mc"].value("n", 1000), r.seed);
      j["mc"] = {{"T", est.T},         {"n", est.n},         {"mean", est.mean},
                 {"std_error", est.std_error}, {"ci_lo", est.ci_lo}, {"ci_hi", est.ci_hi},
                 {"ergodic_warning", est.ergodic_warning}};
    }
    r.manifest.report["ep"] = j;
    r.emit("ep.json", j.dump(2) + "\n");
  });

  PressureCurve curve;
  bool have_curve = false;
  r.task("pressure", [&](const json& block) {
    std::vector<double> grid;
    if (block.contains("alpha_grid"))
      grid = block["alpha_grid"].get<std::vector<double>>();
    else
      grid = default_alpha_grid(true);
    const auto T_values = parse_T_range(block, "T_range", 1, 6);
    curve = pressure_curve(r.proc, grid, T_values, c_constant, r.cap);
    have_curve = true;
    std::ostringstream os;
    io::write_pressure_csv(os, curve);
    r.emit("pressure.csv", os.str());
    r.manifest.report["pressure"] = {{"lower_certified", curve.lower_certified},
                                     {"c", curve.c},
                                     {"lambda0", curve.lambda0}};
  });

  r.task("ldp", [&](const json& block) {
    if (!have_curve) throw Error("ldp requires the pressure task");
    std::vector<double> s_grid;
    if (block.contains("s_grid"))
      s_grid = block["s_grid"].get<std::vector<double>>();
    else
      for (int i = -40; i <= 40; ++i) s_grid.push_back(ep_lb * i / 40.0);
    const RateFunction rf = rate_function(curve, s_grid, ep_lb);
    {
      std::ostringstream os;
      io::write_rate_function_csv(os, rf);
      r.emit("rate_function.csv", os.str());
    }
    if (block.contains("O")) {
      const auto T_values = parse_T_range(block, "T_range", 1, 6);
      const LdpReport rep = ldp_empirical(r.proc, block["O"][0].get<double>(),
                                          block["O"][1].get<double>(), T_values, rf, r.cap);
      std::ostringstream os;
      io::write_ldp_csv(os, rep);
      r.emit("ldp.csv", os.str());
      r.manifest.report["ldp"] = {{"theory_open", rep.theory_open},
                                  {"theory_closed", rep.theory_closed},
                                  {"residual_at_max_T", rep.residual_at_max_T}};
    }
  });

  r.task("hypotest", [&](const json& block) {
    const double eps = block.value("eps", 0.1);
    const auto T_values = parse_T_range(block, "T_range", 1, 6);
    json j;
    const PathTable& tb = r.table(T_values.back());
    const TestSet np = np_test(tb);
    j["np"] = {{"T", np.T}, {"type_I", np.type_I}, {"type_II", np.type_II}};
    j["cT"] = chernoff_cT(tb);
    const auto ch = chernoff_exponent(r.proc, T_values, c_constant, r.cap);
    j["chernoff"] = {{"T", ch.T_values},
                     {"cT", ch.cT},
                     {"rate", ch.rate},
                     {"upper_bound", ch.upper_bound},
                     {"e_half_upper", ch.e_half_upper},
                     {"e_half_lower", ch.bracket_certified ? json(ch.e_half_lower) : json()}};
    const auto st = stein_exponent(r.proc, T_values, eps, ep_lb, ep_ub, r.cap);
    j["stein"] = {{"eps", st.eps},
                  {"T", st.T_values},
                  {"sT", st.sT},
                  {"rate", st.rate},
                  {"minus_ep_upper", st.minus_ep_upper},
                  {"ergodic_warning", st.ergodic_warning}};
    if (have_curve) {
      std::vector<double> s_grid;
      if (block.contains("s_grid"))
        s_grid = block["s_grid"].get<std::vector<double>>();
      else
        for (int i = 0; i <= 20; ++i) s_grid.push_back(0.05 * i);
      const HoeffdingCurve h = hoeffding_psi(curve, s_grid);
      std::ostringstream os;
      io::write_hoeffding_csv(os, h);
      r.emit("hoeffding.csv", os.str());
      j["hoeffding"] = {{"psi0", h.psi.empty() ? 0.0 : h.psi.front()}};
    }
    r.manifest.report["hypotest"] = j;
    r.emit("hypotest.json", j.dump(2) + "\n");
  });

  r.emit("manifest.json", r.manifest.to_json().dump(2) + "\n");
  return r.manifest;
}

}  // namespace rqm
