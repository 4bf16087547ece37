#pragma once

#include <optional>

#include "rqm/pathspace.hpp"

namespace rqm {

/// sigma_T(w) = log P_T(w) - log Phat_T(w), with +inf / -inf on one-sided
/// support and 0 for words outside both supports.
double sigma(const Process& p, const Word& w);
double sigma_at(const PathTable& table, std::uint64_t index);

struct SigmaStats {
  int T = 0;
  double mean_sigma = 0;      // E[sigma_T] = S(P_T | Phat_T); +inf on support failure
  double lower_bound_ep = 0;  // (E[sigma_T] + log lambda0) / T
};

SigmaStats mean_sigma(const Process& p, int T, std::uint64_t cap = (1ull << 21));
SigmaStats mean_sigma(const PathTable& table, double lambda0);

struct EpBoundsReport {
  std::vector<int> T_values;
  std::vector<double> mean_sigma_seq;   // E[sigma_T], monotone in T
  std::vector<double> rate_seq;         // E[sigma_T]/T
  std::vector<double> lower_seq;        // (E[sigma_T]+log lambda0)/T
  double ep_lower = 0;                  // running sup of lower_seq (certified)
  std::optional<double> ceiling;        // -log eps when every letter is strictly positive
  bool b_violated = false;              // some word has P>0, Phat=0
  int b_violation_T = 0;
};

EpBoundsReport ep_bounds(const Process& p, int T_max, std::uint64_t cap = (1ull << 21));

struct MonteCarloEstimate {
  int T = 0;
  int n = 0;
  double mean = 0;
  double std_error = 0;
  double ci_lo = 0, ci_hi = 0;  // 95% normal interval
  bool ergodic_warning = false; // eigenvalue 1 of Phi not simple: a.s. limit may be random
};

/// Mean of sigma_T/T over n sampled trajectories. Convergence to ep is a.s.
/// and in L^1 when ep < inf.
MonteCarloEstimate ep_monte_carlo(const Process& p, int T, int n, std::uint64_t rng_seed);

/// e_T(alpha) = log sum_w P_T(w)^{1-alpha} Phat_T(w)^alpha, computed by
/// logsumexp. Conventions: 0^0 = 1 (endpoint alphas return exact 0); for
/// alpha outside [0,1] a support mismatch makes the sum +inf.
double renyi_pressure(const Process& p, double alpha, int T, std::uint64_t cap = (1ull << 21));
double renyi_pressure(const PathTable& table, double alpha);

struct PressureCurve {
  std::vector<double> alpha_grid;
  std::vector<int> T_values;
  /// e_T[i][j]: finite-time pressure at alpha_grid[i], T_values[j].
  std::vector<std::vector<double>> e_T;
  /// Per alpha: min_T (e_T + log(1/lambda0))/T — always a valid upper bound.
  std::vector<double> upper;
  /// Per alpha: max_T (e_T + c)/T; meaningful only when lower_certified.
  std::vector<double> lower;
  bool lower_certified = false;
  double lambda0 = 0;
  double c = 0;  // superadditivity constant log(C_tau lambda0^2 / (tau+1))
  std::vector<double> bracket_width;  // upper - lower per alpha (when certified)

  int index_of_alpha(double alpha) const;
};

/// Fekete sandwich across a T-range. `c_constant` is the certified
/// superadditivity constant; when absent, lower envelopes are suppressed.
PressureCurve pressure_curve(const Process& p, const std::vector<double>& alpha_grid,
                             const std::vector<int>& T_values,
                             std::optional<double> c_constant = std::nullopt,
                             std::uint64_t cap = (1ull << 21));

/// 41 uniform points on [0,1]; with refinement, extra points 1 - 2^-k
/// (k = 2..20) so curves stay usable near the open endpoint alpha -> 1.
std::vector<double> default_alpha_grid(bool hoeffding_refinement = false);

struct TiltedMeasure {
  double alpha = 0;
  int T = 0;
  std::vector<double> log_q;  // log Q_T(w) = -e_T(alpha) + (1-alpha)log P + alpha log Phat
  double log_norm_defect = 0; // |logsumexp(log_q)|, should be ~0
};

TiltedMeasure tilted_measure(const Process& p, double alpha, int T,
                             std::uint64_t cap = (1ull << 21));
TiltedMeasure tilted_measure(const PathTable& table, double alpha);

/// Shannon entropy -sum p log p of a log-domain table; -inf entries carry
/// zero mass.
double shannon_entropy(const std::vector<double>& log_probs);

/// S(P_T)/T per T: an upper bound on the KS entropy at every T.
std::vector<double> ks_entropy_estimate(const Process& p, const std::vector<int>& T_values,
                                        std::uint64_t cap = (1ull << 21));

}  // namespace rqm
