#include "rqm/entropic.hpp"

#include <algorithm>
#include <cmath>

namespace rqm {

double sigma(const Process& p, const Word& w) {
  const double lp = log_prob(p, w, Which::Forward);
  const double lph = log_prob(p, w, Which::Reversed);
  if (lp == kNegInf && lph == kNegInf) return 0;
  if (lph == kNegInf) return kPosInf;
  if (lp == kNegInf) return kNegInf;
  return lp - lph;
}

double sigma_at(const PathTable& table, std::uint64_t index) {
  const double lp = table.log_p[index];
  const double lph = table.log_p_hat[index];
  if (lp == kNegInf && lph == kNegInf) return 0;
  if (lph == kNegInf) return kPosInf;
  if (lp == kNegInf) return kNegInf;
  return lp - lph;
}

SigmaStats mean_sigma(const PathTable& table, double lambda0) {
  SigmaStats st;
  st.T = table.T;
  double acc = 0;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    if (lp == kNegInf) continue;
    if (table.log_p_hat[i] == kNegInf) {
      st.mean_sigma = kPosInf;
      st.lower_bound_ep = kPosInf;
      return st;
    }
    acc += std::exp(lp) * (lp - table.log_p_hat[i]);
  }
  st.mean_sigma = acc;
  st.lower_bound_ep = (acc + std::log(lambda0)) / table.T;
  return st;
}

SigmaStats mean_sigma(const Process& p, int T, std::uint64_t cap) {
  return mean_sigma(enumerate_table(p, T, cap), p.lambda0);
}

EpBoundsReport ep_bounds(const Process& p, int T_max, std::uint64_t cap) {
  EpBoundsReport rep;
  rep.ep_lower = kNegInf;
  for (int T = 1; T <= T_max; ++T) {
    const SigmaStats st = mean_sigma(p, T, cap);
    rep.T_values.push_back(T);
    rep.mean_sigma_seq.push_back(st.mean_sigma);
    rep.rate_seq.push_back(st.mean_sigma / T);
    rep.lower_seq.push_back(st.lower_bound_ep);
    if (st.mean_sigma == kPosInf) {
      rep.b_violated = true;
      rep.b_violation_T = T;
      rep.ep_lower = kPosInf;
      break;
    }
    rep.ep_lower = std::max(rep.ep_lower, st.lower_bound_ep);
  }
  const auto v = validate(p.instrument);
  if (v.all_letters_strictly_positive) {
    const double eps = *std::min_element(v.letter_epsilons.begin(), v.letter_epsilons.end());
    rep.ceiling = -std::log(eps);
  }
  return rep;
}

MonteCarloEstimate ep_monte_carlo(const Process& p, int T, int n, std::uint64_t rng_seed) {
  MonteCarloEstimate est;
  est.T = T;
  est.n = n;
  est.ergodic_warning = !spectral_report(p.instrument.total()).eigenvalue_one_simple;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    const Trajectory tr = sample_trajectory(p, T, rng_seed + static_cast<std::uint64_t>(i));
    const double x = (tr.log_p - tr.log_p_hat) / T;
    sum += x;
    sumsq += x * x;
  }
  est.mean = sum / n;
  const double var = n > 1 ? std::max(0.0, (sumsq - n * est.mean * est.mean) / (n - 1)) : 0.0;
  est.std_error = std::sqrt(var / n);
  est.ci_lo = est.mean - 1.96 * est.std_error;
  est.ci_hi = est.mean + 1.96 * est.std_error;
  return est;
}

double renyi_pressure(const PathTable& table, double alpha) {
  if (alpha == 0.0 || alpha == 1.0) return 0.0;  // normalization, exact by convention
  const bool inside = alpha > 0.0 && alpha < 1.0;
  std::vector<double> terms;
  terms.reserve(table.size());
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    if (lp == kNegInf && lph == kNegInf) continue;
    if (lp == kNegInf || lph == kNegInf) {
      if (inside) continue;     // 0^positive = 0 for both exponents
      return kPosInf;           // negative power of 0: support equality required
    }
    terms.push_back((1 - alpha) * lp + alpha * lph);
  }
  if (terms.empty()) return kNegInf;
  return logsumexp(terms);
}

double renyi_pressure(const Process& p, double alpha, int T, std::uint64_t cap) {
  return renyi_pressure(enumerate_table(p, T, cap), alpha);
}

int PressureCurve::index_of_alpha(double alpha) const {
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    if (std::abs(alpha_grid[i] - alpha) <= 1e-12) return static_cast<int>(i);
  throw Error("alpha not on the pressure-curve grid");
}

PressureCurve pressure_curve(const Process& p, const std::vector<double>& alpha_grid,
                             const std::vector<int>& T_values,
                             std::optional<double> c_constant, std::uint64_t cap) {
  if (alpha_grid.empty() || T_values.empty()) throw Error("pressure_curve: empty grid");
  PressureCurve curve;
  curve.alpha_grid = alpha_grid;
  curve.T_values = T_values;
  curve.lambda0 = p.lambda0;
  curve.lower_certified = c_constant.has_value();
  curve.c = c_constant.value_or(0.0);
  const std::size_t na = alpha_grid.size();
  curve.e_T.assign(na, std::vector<double>(T_values.size(), 0.0));
  curve.upper.assign(na, kPosInf);
  curve.lower.assign(na, kNegInf);
  const double log_inv_l0 = -std::log(p.lambda0);

  for (std::size_t j = 0; j < T_values.size(); ++j) {
    const PathTable table = enumerate_table(p, T_values[j], cap);
    for (std::size_t i = 0; i < na; ++i) {
      const double e = renyi_pressure(table, alpha_grid[i]);
      curve.e_T[i][j] = e;
      curve.upper[i] = std::min(curve.upper[i], (e + log_inv_l0) / T_values[j]);
      if (curve.lower_certified)
        curve.lower[i] = std::max(curve.lower[i], (e + curve.c) / T_values[j]);
    }
  }
  if (curve.lower_certified) {
    curve.bracket_width.resize(na);
    for (std::size_t i = 0; i < na; ++i)
      curve.bracket_width[i] = curve.upper[i] - curve.lower[i];
  }
  return curve;
}

std::vector<double> default_alpha_grid(bool hoeffding_refinement) {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i / 40.0);
  if (hoeffding_refinement) {
    for (int k = 2; k <= 20; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               grid.end());
  }
  return grid;
}

TiltedMeasure tilted_measure(const PathTable& table, double alpha) {
  TiltedMeasure q;
  q.alpha = alpha;
  q.T = table.T;
  std::vector<double> raw(table.size(), kNegInf);
  std::vector<double> finite;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    double v;
    if (alpha == 0.0)
      v = lp;
    else if (alpha == 1.0)
      v = lph;
    else if (lp == kNegInf || lph == kNegInf)
      v = kNegInf;
    else
      v = (1 - alpha) * lp + alpha * lph;
    raw[i] = v;
    if (v > kNegInf) finite.push_back(v);
  }
  const double e = finite.empty() ? kNegInf : logsumexp(finite);
  q.log_q.resize(table.size());
  finite.clear();
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    q.log_q[i] = raw[i] == kNegInf ? kNegInf : raw[i] - e;
    if (q.log_q[i] > kNegInf) finite.push_back(q.log_q[i]);
  }
  q.log_norm_defect = std::abs(logsumexp(finite));
  return q;
}

TiltedMeasure tilted_measure(const Process& p, double alpha, int T, std::uint64_t cap) {
  return tilted_measure(enumerate_table(p, T, cap), alpha);
}

double shannon_entropy(const std::vector<double>& log_probs) {
  double h = 0;
  for (double lp : log_probs) {
    if (lp == kNegInf) continue;
    h -= std::exp(lp) * lp;
  }
  return h;
}

std::vector<double> ks_entropy_estimate(const Process& p, const std::vector<int>& T_values,
                                        std::uint64_t cap) {
  std::vector<double> out;
  out.reserve(T_values.size());
  for (int T : T_values) {
    const PathTable table = enumerate_table(p, T, cap);
    out.push_back(shannon_entropy(table.log_p) / T);
  }
  return out;
}

}  // namespace rqm
