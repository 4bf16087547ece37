#pragma once

#include "rqm/entropic.hpp"

namespace rqm {

/// Deterministic test: accept-forward region stored as a threshold rule on
/// sigma_T plus explicit exceptions (words moved across the threshold).
struct TestSet {
  int T = 0;
  double sigma_threshold = 0;
  bool include_equal = true;                 // sigma == threshold words are in T
  std::vector<std::uint64_t> exceptions;     // word indices flipped relative to the rule
  double type_I = 0;   // P_T(complement)
  double type_II = 0;  // Phat_T(T)

  bool contains(const PathTable& table, std::uint64_t index) const;
};

/// Neyman-Pearson set {sigma_T >= 0}; verifies the saturation identity
/// type_I + Phat(T) = 2 c_T to 1e-10.
TestSet np_test(const Process& p, int T, std::uint64_t cap = (1ull << 21));
TestSet np_test(const PathTable& table);

/// c_T = 1/2 sum_w min(P_T, Phat_T).
double chernoff_cT(const Process& p, int T, std::uint64_t cap = (1ull << 21));
double chernoff_cT(const PathTable& table);

struct ChernoffReport {
  std::vector<int> T_values;
  std::vector<double> cT;
  std::vector<double> rate;          // (1/T) log c_T
  std::vector<double> upper_bound;   // e_T(1/2)/T - log(2)/T
  double e_half_upper = 0;           // bracket for the limit e(1/2)
  double e_half_lower = 0;
  bool bracket_certified = false;
};

ChernoffReport chernoff_exponent(const Process& p, const std::vector<int>& T_values,
                                 std::optional<double> c_constant = std::nullopt,
                                 std::uint64_t cap = (1ull << 21));

struct SteinResult {
  double value = 0;  // s_T(eps) = minimal Phat_T(T) over tests with P_T(T^c) <= eps
  TestSet test;
};

/// Greedy optimum over deterministic tests: words sorted by likelihood ratio
/// P/Phat descending (ties lexicographic), added until P-mass >= 1 - eps.
SteinResult stein_sT(const Process& p, int T, double eps, std::uint64_t cap = (1ull << 21));
SteinResult stein_sT(const PathTable& table, double eps);

struct SteinReport {
  double eps = 0;
  std::vector<int> T_values;
  std::vector<double> sT;
  std::vector<double> rate;       // (1/T) log s_T(eps)
  double minus_ep_lower = 0;      // target bracket: rate -> -ep
  double minus_ep_upper = 0;
  bool ergodic_warning = false;
};

SteinReport stein_exponent(const Process& p, const std::vector<int>& T_values, double eps,
                           double ep_lower_bound, std::optional<double> ep_upper_bound,
                           std::uint64_t cap = (1ull << 21));

struct HoeffdingCurve {
  std::vector<double> s_grid;
  std::vector<double> psi;
  std::vector<double> psi_err_lo, psi_err_hi;  // from the two pressure envelopes
};

/// psi(s) = -sup_{alpha in [0,1)} (-s alpha - e(alpha)) / (1 - alpha), the
/// open endpoint handled by the refined grid points near alpha = 1.
HoeffdingCurve hoeffding_psi(const PressureCurve& curve, const std::vector<double>& s_grid);

}  // namespace rqm
