#include "rqm/assumptions.hpp"

#include <algorithm>
#include <cmath>

namespace rqm {

std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Algebraic: return "algebraic";
    case Method::Enumerative: return "enumerative";
    default: return "randomized";
  }
}

AssumptionCertificate check_A(const Process& p) {
  AssumptionCertificate cert;
  cert.which = 'A';
  cert.method = Method::Algebraic;
  const Matrix image = p.instrument.total().apply_schrodinger(p.rho);
  const double defect = (image - p.rho).norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(p.rho));
  const double l0 = es.eigenvalues().minCoeff();
  cert.lambda0 = l0;
  if (defect <= 1e-9 && l0 > 0) {
    cert.status = Status::Certified;
    cert.detail = "invariance defect " + std::to_string(defect);
  } else {
    cert.status = Status::Refuted;
    cert.detail = defect > 1e-9 ? "rho is not Phi^*-invariant (defect " + std::to_string(defect) + ")"
                                : "rho is not strictly positive";
  }
  return cert;
}

AssumptionCertificate check_B(const Process& p, int T_max, std::uint64_t cap) {
  AssumptionCertificate cert;
  cert.which = 'B';
  const ValidationReport v = validate(p.instrument);
  cert.letter_epsilons = v.letter_epsilons;
  if (v.all_letters_strictly_positive) {
    cert.status = Status::Certified;
    cert.method = Method::Algebraic;
    cert.detail = "every letter map is strictly positive";
    return cert;
  }
  cert.method = Method::Enumerative;
  cert.horizon = T_max;
  for (int T = 1; T <= T_max; ++T) {
    PathTable table;
    try {
      table = enumerate_table(p, T, cap);
    } catch (const CapExceeded&) {
      cert.status = Status::Inconclusive;
      cert.horizon = T - 1;
      cert.detail = "enumeration cap reached before T_max";
      return cert;
    }
    for (std::uint64_t i = 0; i < table.size(); ++i) {
      const bool fwd = table.log_p[i] > kNegInf;
      const bool rev = table.log_p_hat[i] > kNegInf;
      if (fwd != rev) {
        cert.status = Status::Refuted;
        cert.witness = table.word_at(i);
        cert.detail = "support mismatch at T=" + std::to_string(T) +
                      (fwd ? " (P > 0, Phat = 0)" : " (Phat > 0, P = 0)");
        return cert;
      }
    }
  }
  cert.status = Status::Inconclusive;
  cert.detail = "supports equal up to the horizon; no algebraic certificate";
  return cert;
}

AssumptionCertificate check_C(const Process& p) {
  AssumptionCertificate cert;
  cert.which = 'C';
  cert.method = Method::Algebraic;
  const Process& rev = p.or_process();
  std::vector<Matrix> family;
  for (int a = 0; a < p.num_letters(); ++a) {
    for (const Matrix& vj : p.map(a).kraus)
      for (const Matrix& wk : rev.map(a).kraus) family.push_back(kron(vj, wk.conjugate()));
  }
  const bool irr = is_irreducible_family(family);
  if (!irr) {
    cert.status = Status::Inconclusive;
    cert.detail = "doubled family reducible on H(x)H; the sufficient criterion does not apply";
    return cert;
  }
  // the criterion implies irreducibility of Phi itself; verify the implication
  std::vector<Matrix> phi_family;
  for (int a = 0; a < p.num_letters(); ++a)
    for (const Matrix& vj : p.map(a).kraus) phi_family.push_back(vj);
  if (!is_irreducible_family(phi_family)) {
    cert.status = Status::Inconclusive;
    cert.detail = "doubled family irreducible but Phi reducible: implication check failed";
    return cert;
  }
  cert.status = Status::Certified;
  cert.detail = "doubled Kraus family acts irreducibly on H(x)H";
  return cert;
}

namespace {

/// All words of length 1..len with the Schrodinger word state S_w (so that
/// P(wu) continues from S_w) and the Heisenberg word unit A_w (so that
/// P(uw) = tr(S_u A_w)). P(w) = tr(S_w) = tr(rho A_w).
struct WordData {
  std::vector<Word> words;
  std::vector<Matrix> S, A;
  std::vector<double> P;
};

WordData build_words(const Process& p, int len_max, std::uint64_t cap) {
  const int ell = p.num_letters();
  std::uint64_t count = 0, power = 1;
  for (int t = 1; t <= len_max; ++t) {
    power *= ell;
    count += power;
  }
  if (count > cap) throw CapExceeded(count, cap);

  WordData wd;
  wd.words.reserve(count);
  for (int a = 0; a < ell; ++a) {
    wd.words.push_back({a});
    wd.S.push_back(p.map(a).apply_schrodinger(p.rho));
  }
  std::size_t level_begin = 0, level_end = wd.words.size();
  for (int t = 2; t <= len_max; ++t) {
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int a = 0; a < ell; ++a) {
        Word w = wd.words[i];
        w.push_back(a);
        wd.S.push_back(p.map(a).apply_schrodinger(wd.S[i]));
        wd.words.push_back(std::move(w));
      }
    level_begin = level_end;
    level_end = wd.words.size();
  }
  // A_w = Phi_{w1}[...Phi_{wT}[1]] by suffix recursion per word
  wd.A.resize(wd.words.size());
  for (std::size_t i = 0; i < wd.words.size(); ++i) {
    const Word& w = wd.words[i];
    Matrix a = Matrix::Identity(p.dim(), p.dim());
    for (auto it = w.rbegin(); it != w.rend(); ++it) a = p.map(*it).apply_heisenberg(a);
    wd.A[i] = std::move(a);
  }
  wd.P.reserve(wd.words.size());
  for (const Matrix& s : wd.S) wd.P.push_back(std::max(0.0, s.trace().real()));
  return wd;
}

std::vector<Word> middle_words(int ell, int tau) {
  std::vector<Word> out{{}};
  std::vector<Word> level{{}};
  for (int t = 1; t <= tau; ++t) {
    std::vector<Word> next;
    for (const Word& w : level)
      for (int a = 0; a < ell; ++a) {
        Word x = w;
        x.push_back(a);
        next.push_back(x);
      }
    for (const Word& w : next) out.push_back(w);
    level = std::move(next);
  }
  return out;
}

}  // namespace

CConstants estimate_C_constants(const Process& p, int tau_max, int word_len_max,
                                std::uint64_t cap) {
  const Process& rev = p.or_process();
  const WordData fwd = build_words(p, word_len_max, cap);
  const WordData bwd = build_words(rev, word_len_max, cap);
  const std::vector<Word> middles = middle_words(p.num_letters(), tau_max);

  // Phi_x[A_v] for every middle word x and right word v, both measures
  const std::size_t nw = fwd.words.size();
  std::vector<std::vector<Matrix>> bx(middles.size(), std::vector<Matrix>(nw));
  std::vector<std::vector<Matrix>> bx_hat(middles.size(), std::vector<Matrix>(nw));
  for (std::size_t m = 0; m < middles.size(); ++m)
    for (std::size_t v = 0; v < nw; ++v) {
      Matrix a = fwd.A[v];
      Matrix ah = bwd.A[v];
      for (auto it = middles[m].rbegin(); it != middles[m].rend(); ++it) {
        a = p.map(*it).apply_heisenberg(a);
        ah = rev.map(*it).apply_heisenberg(ah);
      }
      bx[m][v] = std::move(a);
      bx_hat[m][v] = std::move(ah);
    }

  CConstants cc;
  cc.word_len_max = word_len_max;
  cc.per_tau.assign(tau_max + 1, kPosInf);
  for (std::size_t w = 0; w < nw; ++w) {
    const double pw = fwd.P[w], phw = bwd.P[w];
    if (pw <= 0 || phw <= 0) continue;
    for (std::size_t v = 0; v < nw; ++v) {
      const double pv = fwd.P[v], phv = bwd.P[v];
      if (pv <= 0 || phv <= 0) continue;
      const double denom = pw * pv * phw * phv;
      double best = 0;
      std::size_t m = 0;
      for (int tau = 0; tau <= tau_max; ++tau) {
        const std::size_t m_end = m + (tau == 0 ? 1 : static_cast<std::size_t>(
                                                          std::pow(p.num_letters(), tau)));
        for (; m < m_end; ++m) {
          const double pj = std::max(0.0, (fwd.S[w] * bx[m][v]).trace().real());
          const double phj = std::max(0.0, (bwd.S[w] * bx_hat[m][v]).trace().real());
          best = std::max(best, pj * phj / denom);
        }
        cc.per_tau[tau] = std::min(cc.per_tau[tau], best);
      }
    }
  }
  for (int tau = 0; tau <= tau_max; ++tau) {
    if (cc.per_tau[tau] == kPosInf) cc.per_tau[tau] = 0;  // vacuous (no valid pairs)
    if (cc.tau < 0 && cc.per_tau[tau] > 0) {
      cc.tau = tau;
      cc.C_tau = cc.per_tau[tau];
    }
  }
  if (cc.tau >= 0)
    cc.c = std::log(cc.C_tau * p.lambda0 * p.lambda0 / (cc.tau + 1));
  else
    cc.c = kNegInf;
  return cc;
}

AssumptionCertificate check_D(const Process& p, int word_len_max, std::uint64_t cap) {
  AssumptionCertificate cert;
  cert.which = 'D';
  cert.horizon = word_len_max;
  bool all_improving = true;
  for (int a = 0; a < p.num_letters(); ++a)
    if (!is_positivity_improving(p.map(a), 8, 0x9e3779b97f4a7c15ull + a).improving)
      all_improving = false;

  double d0 = kPosInf;
  bool zero_found = false;
  Word zero_witness;
  try {
    const WordData wd = build_words(p, word_len_max, cap);
    for (std::size_t w = 0; w < wd.words.size(); ++w) {
      if (wd.P[w] <= 0) continue;
      for (std::size_t v = 0; v < wd.words.size(); ++v) {
        if (wd.P[v] <= 0) continue;
        const double pj = std::max(0.0, (wd.S[w] * wd.A[v]).trace().real());
        const double ratio = pj / (wd.P[w] * wd.P[v]);
        if (ratio <= 0 && !zero_found) {
          zero_found = true;
          zero_witness = wd.words[w];
          zero_witness.insert(zero_witness.end(), wd.words[v].begin(), wd.words[v].end());
        }
        d0 = std::min(d0, ratio);
      }
    }
    cert.D0 = d0 == kPosInf ? 0 : d0;
  } catch (const CapExceeded&) {
    cert.detail = "cap exceeded; enumerated D_0 estimate unavailable; ";
  }

  if (zero_found) {
    cert.status = Status::Refuted;
    cert.method = Method::Enumerative;
    cert.witness = zero_witness;
    cert.detail += "zero concatenation ratio with positive factors";
  } else if (all_improving) {
    cert.status = Status::Certified;
    cert.method = Method::Randomized;
    cert.detail += "every letter map is positivity improving";
  } else {
    cert.status = Status::Inconclusive;
    cert.method = Method::Randomized;
    cert.detail += "a letter map failed the positivity-improving check";
  }
  return cert;
}

ErgodicityReport ergodicity_report(const Process& p) {
  ErgodicityReport rep;
  rep.spectral = spectral_report(p.instrument.total());
  rep.ergodic = rep.spectral.eigenvalue_one_simple;
  rep.mixing = rep.ergodic && rep.spectral.peripheral_count == 1;
  rep.gap = rep.mixing ? rep.spectral.gap : 0;
  return rep;
}

double cylinder_correlation(const Process& p, const std::vector<double>& f, int t_f,
                            const std::vector<double>& g, int t_g, int n,
                            std::uint64_t cap) {
  const int ell = p.num_letters();
  if (f.size() != static_cast<std::size_t>(std::pow(ell, t_f)) ||
      g.size() != static_cast<std::size_t>(std::pow(ell, t_g)))
    throw Error("cylinder_correlation: value table sizes must be ell^t");
  const int T = std::max(t_f, n + t_g);
  const PathTable table = enumerate_table(p, T, cap);

  auto sub_index = [&](const Word& w, int from, int len) {
    std::uint64_t idx = 0;
    for (int i = 0; i < len; ++i) idx = idx * ell + w[from + i];
    return idx;
  };

  double joint = 0;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    if (table.log_p[i] == kNegInf) continue;
    const Word w = table.word_at(i);
    joint += std::exp(table.log_p[i]) * f[sub_index(w, 0, t_f)] * g[sub_index(w, n, t_g)];
  }
  auto mean_of = [&](const std::vector<double>& h, int t) {
    const PathTable tb = enumerate_table(p, t, cap);
    double m = 0;
    for (std::uint64_t i = 0; i < tb.size(); ++i)
      if (tb.log_p[i] > kNegInf) m += std::exp(tb.log_p[i]) * h[i];
    return m;
  };
  return joint - mean_of(f, t_f) * mean_of(g, t_g);
}

}  // namespace rqm
