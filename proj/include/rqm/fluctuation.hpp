#pragma once

#include "rqm/entropic.hpp"

namespace rqm {

struct SigmaAtom {
  double s = 0;        // sigma_T / T
  double mass_p = 0;   // P_T(sigma_T = sT)
  double mass_p_hat = 0;
};

/// Exact law of sigma_T/T under P_T (and Phat_T), clustered and symmetrized
/// so s and -s atoms pair up. One-sided-support words land in the +-inf
/// masses instead of atoms.
struct SigmaLaw {
  int T = 0;
  double cluster_tol = 0;
  std::vector<SigmaAtom> atoms;  // sorted by s
  double mass_p_at_plus_inf = 0;     // P-mass where Phat = 0 (Assumption-B failure)
  double mass_p_hat_at_minus_inf = 0;
};

SigmaLaw sigma_law(const Process& p, int T, std::uint64_t cap = (1ull << 21));
SigmaLaw sigma_law(const PathTable& table);

/// Max over atoms with s >= 0 of |Q_T(-s) - e^{-Ts} Q_T(s)| / Q_T(s) (the
/// s < 0 instance is the same identity rearranged); exact relation, so values
/// above ~1e-10 indicate a bug or a broken reversal.
double check_fluctuation_relation(const SigmaLaw& law);

struct JarzynskiReport {
  double identity_defect = 0;   // |E[e^{-sigma_T}] - 1| with e^{-inf} = 0
  double inequality_value = 0;  // E[sigma_T]/T, nonnegative
  bool support_flag = false;    // Phat_T puts mass outside supp P_T
};

JarzynskiReport check_jarzynski(const Process& p, int T, std::uint64_t cap = (1ull << 21));

struct RateFunction {
  std::vector<double> s_grid;
  std::vector<double> I;
  std::vector<double> I_err_lo, I_err_hi;  // from lower/upper pressure envelopes
  std::vector<int> argmin_alpha;           // grid index of the minimizing alpha per s
  double validity_lo = 0, validity_hi = 0; // [-ep_lb, ep_lb] with [0,1]-only data
  bool local_only = true;                  // alpha data restricted to [0,1]
};

/// Discrete Legendre transform I(s) = -min_alpha (alpha s + e(alpha)) over the
/// bracket midpoints, with error bars from transforming the two envelopes
/// separately. Requires a certified (lower-bounded) curve.
RateFunction rate_function(const PressureCurve& curve, const std::vector<double>& s_grid,
                           std::optional<double> ep_lower_bound = std::nullopt);

struct LdpRow {
  int T = 0;
  double log_mass = 0;        // log P_T(sigma_T/T in O)
  double empirical_rate = 0;  // log_mass / T
};

struct LdpReport {
  double o_lo = 0, o_hi = 0;
  std::vector<LdpRow> rows;
  double theory_open = 0;    // -inf_{s in O} I(s) over grid points inside O
  double theory_closed = 0;  // same over the closure (endpoint grid values included)
  double residual_at_max_T = 0;
};

LdpReport ldp_empirical(const Process& p, double o_lo, double o_hi,
                        const std::vector<int>& T_values, const RateFunction& rate,
                        std::uint64_t cap = (1ull << 21));

}  // namespace rqm
