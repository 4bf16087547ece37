#pragma once

#include <optional>
#include <string>

#include "rqm/pathspace.hpp"

namespace rqm {

enum class Status { Certified, Refuted, Inconclusive };
enum class Method { Algebraic, Enumerative, Randomized };

std::string to_string(Status s);
std::string to_string(Method m);

struct AssumptionCertificate {
  char which = '?';  // 'A' | 'B' | 'C' | 'D'
  Status status = Status::Inconclusive;
  Method method = Method::Algebraic;
  std::string detail;

  // constants, populated per assumption
  std::optional<double> lambda0;
  std::vector<double> letter_epsilons;
  std::optional<int> tau;
  std::optional<double> C_tau;   // horizon-limited empirical value
  std::optional<double> D0;      // horizon-limited empirical value
  std::optional<int> horizon;    // T_max / word_len_max actually used
  std::optional<Word> witness;   // refutation or reducibility witness
};

/// (A): Phi^*[rho] = rho and rho > 0; returns lambda0 = min sp(rho).
AssumptionCertificate check_A(const Process& p);

/// (B): supp P_T = supp Phat_T for all T. Certified algebraically when every
/// letter map is strictly positive; otherwise support enumeration up to T_max
/// (certified-to-horizon => inconclusive; first mismatch => refuted).
AssumptionCertificate check_B(const Process& p, int T_max, std::uint64_t cap = (1ull << 21));

/// (C): sufficient criterion — the family W_{a,j,k} = V_{a,j} (x) conj(V_{theta(a),k})
/// acts irreducibly on H (x) H. Reducible => inconclusive, never refuted.
AssumptionCertificate check_C(const Process& p);

struct CConstants {
  int tau = -1;                    // smallest tau with positive constant, -1 if none found
  double C_tau = 0;                // empirical min-ratio at that tau (upper bound on C_tau)
  std::vector<double> per_tau;     // constant for each tau = 0..tau_max
  double c = 0;                    // log(C_tau lambda0^2/(tau+1)) at the reported tau
  bool horizon_limited = true;
  int word_len_max = 0;
};

/// Empirical gluing constants: for each tau, the min over word pairs (w, v)
/// with |w|,|v| <= word_len_max of
///   max_{|x| <= tau} P(wxv) Phat(wxv) / (P(w)P(v)Phat(w)Phat(v)).
CConstants estimate_C_constants(const Process& p, int tau_max, int word_len_max,
                                std::uint64_t cap = (1ull << 21));

/// (D): certified when every letter map is positivity improving; also reports
/// the enumerated estimate of D_0 = inf P(wv)/(P(w)P(v)); refuted on a zero
/// ratio with positive factors.
AssumptionCertificate check_D(const Process& p, int word_len_max,
                              std::uint64_t cap = (1ull << 21));

struct ErgodicityReport {
  bool ergodic = false;  // eigenvalue 1 of Phi simple
  bool mixing = false;   // no other peripheral eigenvalues
  double gap = 0;        // -log of second-largest modulus when mixing
  SpectralReport spectral;
};

ErgodicityReport ergodicity_report(const Process& p);

/// E[f g o phi^n] - E[f] E[g] for cylinder functions supported on words of
/// length t_f and t_g (given as value tables in lexicographic order).
double cylinder_correlation(const Process& p, const std::vector<double>& f, int t_f,
                            const std::vector<double>& g, int t_g, int n,
                            std::uint64_t cap = (1ull << 21));

}  // namespace rqm
