#include "rqm/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace rqm::io {

std::string fmt(double x) {
  if (x == kPosInf) return "inf";
  if (x == kNegInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error("matrix JSON must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw Error("ragged matrix JSON");
    for (std::size_t k = 0; k < cols; ++k) {
      const json& e = j[i][k];
      if (e.is_number())
        m(i, k) = Complex(e.get<double>(), 0);
      else if (e.is_array() && e.size() == 2)
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      else
        throw Error("matrix entry must be a number or an [re, im] pair");
    }
  }
  return m;
}

json instrument_to_json(const Instrument& instr) {
  json j;
  j["dim"] = instr.dim;
  j["alphabet"] = instr.alphabet;
  json kraus = json::object();
  for (int a = 0; a < instr.num_letters(); ++a) {
    json list = json::array();
    for (const Matrix& v : instr.maps[a].kraus) list.push_back(matrix_to_json(v));
    kraus[instr.alphabet[a]] = list;
  }
  j["kraus"] = kraus;
  return j;
}

Instrument instrument_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("alphabet") || !j.contains("kraus"))
    throw Error("instrument JSON needs dim, alphabet, kraus");
  const int dim = j["dim"].get<int>();
  const auto alphabet = j["alphabet"].get<std::vector<std::string>>();
  std::vector<CPMap> maps;
  for (const std::string& label : alphabet) {
    if (!j["kraus"].contains(label)) throw Error("kraus missing letter '" + label + "'");
    std::vector<Matrix> kraus;
    for (const json& m : j["kraus"][label]) kraus.push_back(matrix_from_json(m));
    maps.emplace_back(dim, std::move(kraus));
  }
  return Instrument(dim, alphabet, std::move(maps));
}

Process process_from_json(const json& j, bool attach_or) {
  Instrument instr = instrument_from_json(j);

  Matrix rho;
  if (j.contains("rho"))
    rho = matrix_from_json(j["rho"]);
  else
    rho = invariant_state(instr.total()).rho;

  Involution theta = Involution::identity(instr.num_letters());
  if (j.contains("theta")) {
    std::vector<int> perm(instr.num_letters());
    for (int a = 0; a < instr.num_letters(); ++a) perm[a] = a;
    for (const json& pair : j["theta"]) {
      const int a = instr.letter_index(pair[0].get<std::string>());
      const int b = instr.letter_index(pair[1].get<std::string>());
      perm[a] = b;
      perm[b] = a;
    }
    theta = Involution(perm);
  }
  const bool relaxed = j.value("relaxed", false);
  Process p(std::move(instr), std::move(rho), std::move(theta), relaxed);
  if (attach_or) p.attach_canonical_or();
  return p;
}

Process load_process(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instrument file: " + path);
  json j;
  in >> j;
  return process_from_json(j);
}

void save_process(const Process& p, const std::string& path) {
  json j = instrument_to_json(p.instrument);
  j["rho"] = matrix_to_json(p.rho);
  json theta = json::array();
  for (int a = 0; a < p.num_letters(); ++a)
    if (p.theta(a) > a)
      theta.push_back({p.instrument.alphabet[a], p.instrument.alphabet[p.theta(a)]});
  j["theta"] = theta;
  std::ofstream out(path);
  if (!out) throw Error("cannot write instrument file: " + path);
  out << j.dump(2) << "\n";
}

Process resolve_process_source(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) != 0) return load_process(source);
  const std::string body = source.substr(prefix.size());
  const auto paren = body.find('(');
  if (paren == std::string::npos || body.back() != ')')
    throw Error("builtin source must look like builtin:name(args)");
  const std::string name = body.substr(0, paren);
  const std::string args = body.substr(paren + 1, body.size() - paren - 2);
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t next = args.find(',', pos);
    if (next == std::string::npos) next = args.size();
    vals.push_back(std::stod(args.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (name == "bernoulli" && vals.size() == 1) return bernoulli(vals[0]);
  if (name == "cycle" && vals.size() == 2)
    return cycle_chain(static_cast<int>(vals[0]), vals[1]);
  if (name == "markov") throw Error("builtin:markov needs a file; pass the matrix via JSON");
  throw Error("unknown builtin process: " + name);
}

json validation_to_json(const ValidationReport& rep) {
  json j;
  j["valid"] = rep.valid;
  j["unitality_defect"] = rep.unitality_defect;
  j["letter_epsilons"] = rep.letter_epsilons;
  j["all_letters_strictly_positive"] = rep.all_letters_strictly_positive;
  json issues = json::array();
  for (const auto& is : rep.issues) issues.push_back({{"what", is.what}, {"magnitude", is.magnitude}});
  j["issues"] = issues;
  return j;
}

json certificate_to_json(const AssumptionCertificate& cert) {
  json j;
  j["which"] = std::string(1, cert.which);
  j["status"] = to_string(cert.status);
  j["method"] = to_string(cert.method);
  j["detail"] = cert.detail;
  if (cert.lambda0) j["lambda0"] = *cert.lambda0;
  if (!cert.letter_epsilons.empty()) j["letter_epsilons"] = cert.letter_epsilons;
  if (cert.tau) j["tau"] = *cert.tau;
  if (cert.C_tau) j["C_tau"] = *cert.C_tau;
  if (cert.D0) j["D0"] = *cert.D0;
  if (cert.horizon) j["horizon"] = *cert.horizon;
  if (cert.witness) j["witness"] = *cert.witness;
  return j;
}

json spectral_to_json(const SpectralReport& rep) {
  json j;
  j["spectral_radius"] = rep.spectral_radius;
  j["eigenvalue_one_simple"] = rep.eigenvalue_one_simple;
  j["peripheral_count"] = rep.peripheral_count;
  j["gap"] = rep.gap == kPosInf ? json("inf") : json(rep.gap);
  j["unital"] = rep.unital;
  return j;
}

void write_path_table_csv(std::ostream& os, const PathTable& table,
                          const std::vector<std::string>& alphabet) {
  os << "word,labels,log_p,log_p_hat\n";
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const Word w = table.word_at(i);
    std::string labels;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) labels += '.';
      labels += alphabet[w[k]];
    }
    os << i << ',' << labels << ',' << fmt(table.log_p[i]) << ',' << fmt(table.log_p_hat[i])
       << '\n';
  }
}

void write_pressure_csv(std::ostream& os, const PressureCurve& curve) {
  os << "alpha,T,e_T,upper,lower\n";
  for (std::size_t i = 0; i < curve.alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < curve.T_values.size(); ++j)
      os << fmt(curve.alpha_grid[i]) << ',' << curve.T_values[j] << ','
         << fmt(curve.e_T[i][j]) << ',' << fmt(curve.upper[i]) << ','
         << (curve.lower_certified ? fmt(curve.lower[i]) : std::string("")) << '\n';
}

void write_sigma_law_csv(std::ostream& os, const SigmaLaw& law) {
  os << "s,mass_p,mass_p_hat\n";
  for (const SigmaAtom& a : law.atoms)
    os << fmt(a.s) << ',' << fmt(a.mass_p) << ',' << fmt(a.mass_p_hat) << '\n';
  if (law.mass_p_at_plus_inf > 0)
    os << "inf," << fmt(law.mass_p_at_plus_inf) << ",0\n";
  if (law.mass_p_hat_at_minus_inf > 0)
    os << "-inf,0," << fmt(law.mass_p_hat_at_minus_inf) << '\n';
}

void write_rate_function_csv(std::ostream& os, const RateFunction& rf) {
  os << "s,I,I_err_lo,I_err_hi\n";
  for (std::size_t i = 0; i < rf.s_grid.size(); ++i)
    os << fmt(rf.s_grid[i]) << ',' << fmt(rf.I[i]) << ',' << fmt(rf.I_err_lo[i]) << ','
       << fmt(rf.I_err_hi[i]) << '\n';
}

void write_ldp_csv(std::ostream& os, const LdpReport& rep) {
  os << "T,log_mass,empirical_rate,theory_open,theory_closed\n";
  for (const LdpRow& r : rep.rows)
    os << r.T << ',' << fmt(r.log_mass) << ',' << fmt(r.empirical_rate) << ','
       << fmt(rep.theory_open) << ',' << fmt(rep.theory_closed) << '\n';
}

void write_hoeffding_csv(std::ostream& os, const HoeffdingCurve& h) {
  os << "s,psi,psi_err_lo,psi_err_hi\n";
  for (std::size_t i = 0; i < h.s_grid.size(); ++i)
    os << fmt(h.s_grid[i]) << ',' << fmt(h.psi[i]) << ',' << fmt(h.psi_err_lo[i]) << ','
       << fmt(h.psi_err_hi[i]) << '\n';
}

json trajectory_to_json(const Trajectory& tr, const std::vector<std::string>& alphabet) {
  json j;
  json word = json::array();
  for (int a : tr.word) word.push_back(alphabet[a]);
  j["word"] = word;
  j["log_p"] = tr.log_p;
  j["log_p_hat"] = tr.log_p_hat == kNegInf ? json("-inf") : json(tr.log_p_hat);
  j["sigma"] = tr.log_p_hat == kNegInf ? json("inf") : json(tr.log_p - tr.log_p_hat);
  return j;
}

}  // namespace rqm::io
