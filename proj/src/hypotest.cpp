#include "rqm/hypotest.hpp"

#include <algorithm>
#include <cmath>

namespace rqm {

bool TestSet::contains(const PathTable& table, std::uint64_t index) const {
  const double s = sigma_at(table, index);
  bool in = include_equal ? s >= sigma_threshold : s > sigma_threshold;
  if (std::binary_search(exceptions.begin(), exceptions.end(), index)) in = !in;
  return in;
}

TestSet np_test(const PathTable& table) {
  TestSet t;
  t.T = table.T;
  t.sigma_threshold = 0;
  t.include_equal = true;
  double c = 0;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    const double p = lp == kNegInf ? 0 : std::exp(lp);
    const double ph = lph == kNegInf ? 0 : std::exp(lph);
    if (sigma_at(table, i) >= 0)
      t.type_II += ph;
    else
      t.type_I += p;
    c += std::min(p, ph);
  }
  // Neyman-Pearson saturation: both inequalities defining c_T are equalities
  // on this set.
  if (std::abs(0.5 * (t.type_I + t.type_II) - 0.5 * c) > 1e-10)
    throw Error("NP saturation identity violated");
  return t;
}

TestSet np_test(const Process& p, int T, std::uint64_t cap) {
  return np_test(enumerate_table(p, T, cap));
}

double chernoff_cT(const PathTable& table) {
  double acc = 0;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    if (lp == kNegInf || lph == kNegInf) continue;  // min with 0
    acc += std::exp(std::min(lp, lph));
  }
  return 0.5 * acc;
}

double chernoff_cT(const Process& p, int T, std::uint64_t cap) {
  return chernoff_cT(enumerate_table(p, T, cap));
}

ChernoffReport chernoff_exponent(const Process& p, const std::vector<int>& T_values,
                                 std::optional<double> c_constant, std::uint64_t cap) {
  ChernoffReport rep;
  rep.T_values = T_values;
  rep.e_half_upper = kPosInf;
  rep.e_half_lower = kNegInf;
  rep.bracket_certified = c_constant.has_value();
  const double log_inv_l0 = -std::log(p.lambda0);
  for (int T : T_values) {
    const PathTable table = enumerate_table(p, T, cap);
    const double cT = chernoff_cT(table);
    const double eh = renyi_pressure(table, 0.5);
    rep.cT.push_back(cT);
    rep.rate.push_back(std::log(cT) / T);
    rep.upper_bound.push_back((eh - std::log(2.0)) / T);
    rep.e_half_upper = std::min(rep.e_half_upper, (eh + log_inv_l0) / T);
    if (c_constant) rep.e_half_lower = std::max(rep.e_half_lower, (eh + *c_constant) / T);
  }
  return rep;
}

SteinResult stein_sT(const PathTable& table, double eps) {
  if (!(eps > 0 && eps < 1)) throw Error("stein_sT: eps must be in (0,1)");
  std::vector<std::uint64_t> order;
  order.reserve(table.size());
  for (std::uint64_t i = 0; i < table.size(); ++i)
    if (table.log_p[i] > kNegInf) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    const double sa = sigma_at(table, a);
    const double sb = sigma_at(table, b);
    if (sa != sb) return sa > sb;  // likelihood ratio descending
    return a < b;                  // lexicographic tie-break
  });

  SteinResult res;
  res.test.T = table.T;
  res.test.include_equal = false;
  double p_mass = 0;
  double ph_mass = 0;
  double last_sigma = kPosInf;
  std::vector<std::uint64_t> taken_at_threshold;
  for (std::uint64_t idx : order) {
    if (p_mass >= 1 - eps - 1e-15) break;
    const double s = sigma_at(table, idx);
    if (s != last_sigma) {
      last_sigma = s;
      taken_at_threshold.clear();
    }
    taken_at_threshold.push_back(idx);
    p_mass += std::exp(table.log_p[idx]);
    if (table.log_p_hat[idx] > kNegInf) ph_mass += std::exp(table.log_p_hat[idx]);
  }
  res.value = ph_mass;
  res.test.sigma_threshold = last_sigma;
  res.test.exceptions = taken_at_threshold;  // the part of the boundary class we kept
  std::sort(res.test.exceptions.begin(), res.test.exceptions.end());
  res.test.type_I = std::max(0.0, 1 - p_mass);
  res.test.type_II = ph_mass;
  return res;
}

SteinResult stein_sT(const Process& p, int T, double eps, std::uint64_t cap) {
  return stein_sT(enumerate_table(p, T, cap), eps);
}

SteinReport stein_exponent(const Process& p, const std::vector<int>& T_values, double eps,
                           double ep_lower_bound, std::optional<double> ep_upper_bound,
                           std::uint64_t cap) {
  SteinReport rep;
  rep.eps = eps;
  rep.T_values = T_values;
  rep.minus_ep_upper = -ep_lower_bound;
  rep.minus_ep_lower = ep_upper_bound ? -*ep_upper_bound : kNegInf;
  rep.ergodic_warning = !spectral_report(p.instrument.total()).eigenvalue_one_simple;
  for (int T : T_values) {
    const double s = stein_sT(p, T, eps, cap).value;
    rep.sT.push_back(s);
    rep.rate.push_back(std::log(s) / T);
  }
  return rep;
}

namespace {

double psi_from_envelope(const std::vector<double>& alpha, const std::vector<double>& env,
                         double s) {
  double sup = kNegInf;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double a = alpha[i];
    if (a < 0 || a >= 1) continue;  // the supremum runs over [0,1)
    sup = std::max(sup, (-s * a - env[i]) / (1 - a));
  }
  return -sup;
}

}  // namespace

HoeffdingCurve hoeffding_psi(const PressureCurve& curve, const std::vector<double>& s_grid) {
  if (!curve.lower_certified)
    throw Error("hoeffding_psi: pressure curve has no certified lower envelope");
  std::vector<double> mid(curve.alpha_grid.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (curve.upper[i] + curve.lower[i]);

  HoeffdingCurve h;
  h.s_grid = s_grid;
  for (double s : s_grid) {
    if (s < 0) throw Error("hoeffding_psi: s_grid must lie in [0,inf)");
    h.psi.push_back(psi_from_envelope(curve.alpha_grid, mid, s));
    h.psi_err_hi.push_back(psi_from_envelope(curve.alpha_grid, curve.upper, s));
    h.psi_err_lo.push_back(psi_from_envelope(curve.alpha_grid, curve.lower, s));
  }
  return h;
}

}  // namespace rqm
