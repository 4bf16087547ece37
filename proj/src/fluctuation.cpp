#include "rqm/fluctuation.hpp"

#include <algorithm>
#include <cmath>

namespace rqm {

SigmaLaw sigma_law(const PathTable& table) {
  SigmaLaw law;
  law.T = table.T;
  law.cluster_tol = 1e-9 * table.T;

  struct Raw {
    double s, p, ph;
  };
  std::vector<Raw> raw;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    if (lp == kNegInf && lph == kNegInf) continue;
    if (lph == kNegInf) {
      law.mass_p_at_plus_inf += std::exp(lp);
      continue;
    }
    if (lp == kNegInf) {
      law.mass_p_hat_at_minus_inf += std::exp(lph);
      continue;
    }
    raw.push_back({(lp - lph) / table.T, std::exp(lp), std::exp(lph)});
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.s < b.s; });

  // cluster equal sigma values (collisions are exact-combinatorial, so the
  // tolerance only needs to absorb rounding of sums of logs)
  const double tol = law.cluster_tol / table.T;  // atoms live on the sigma/T axis
  for (const Raw& r : raw) {
    if (!law.atoms.empty() && r.s - law.atoms.back().s <= tol) {
      SigmaAtom& a = law.atoms.back();
      const double w = a.mass_p + r.p;
      a.s = w > 0 ? (a.s * a.mass_p + r.s * r.p) / w : (a.s + r.s) / 2;
      a.mass_p += r.p;
      a.mass_p_hat += r.ph;
    } else {
      law.atoms.push_back({r.s, r.p, r.ph});
    }
  }

  // symmetrize: snap each negative atom onto the negation of its partner
  for (SigmaAtom& a : law.atoms) {
    if (a.s >= 0) continue;
    for (const SigmaAtom& b : law.atoms) {
      if (b.s > 0 && std::abs(a.s + b.s) <= tol) {
        a.s = -b.s;
        break;
      }
    }
  }
  return law;
}

SigmaLaw sigma_law(const Process& p, int T, std::uint64_t cap) {
  return sigma_law(enumerate_table(p, T, cap));
}

double check_fluctuation_relation(const SigmaLaw& law) {
  const double tol = law.atoms.empty() ? 0 : law.cluster_tol / law.T;
  double worst = 0;
  for (const SigmaAtom& a : law.atoms) {
    // the instance at -s is the same identity rearranged; checking it with the
    // small mass in the denominator would just amplify rounding by e^{Ts}
    if (a.mass_p <= 0 || a.s < 0) continue;
    double mass_neg = 0;
    for (const SigmaAtom& b : law.atoms)
      if (std::abs(b.s + a.s) <= std::max(tol, 1e-15)) mass_neg += b.mass_p;
    const double predicted = std::exp(-law.T * a.s) * a.mass_p;
    worst = std::max(worst, std::abs(mass_neg - predicted) / a.mass_p);
  }
  // a negative atom with no positive partner violates the relation outright
  for (const SigmaAtom& a : law.atoms) {
    if (a.mass_p <= 0 || a.s >= 0) continue;
    bool paired = false;
    for (const SigmaAtom& b : law.atoms)
      if (b.mass_p > 0 && std::abs(b.s + a.s) <= std::max(tol, 1e-15)) paired = true;
    if (!paired) worst = kPosInf;
  }
  return worst;
}

JarzynskiReport check_jarzynski(const Process& p, int T, std::uint64_t cap) {
  const PathTable table = enumerate_table(p, T, cap);
  JarzynskiReport rep;
  double sum = 0;          // E[e^{-sigma_T}] = Phat_T(supp P_T)
  double outside = 0;      // Phat-mass outside supp P_T
  double mean = 0;
  bool b_fail = false;
  for (std::uint64_t i = 0; i < table.size(); ++i) {
    const double lp = table.log_p[i];
    const double lph = table.log_p_hat[i];
    if (lp == kNegInf) {
      if (lph > kNegInf) outside += std::exp(lph);
      continue;
    }
    if (lph > kNegInf) {
      sum += std::exp(lph);
      mean += std::exp(lp) * (lp - lph);
    } else {
      b_fail = true;  // e^{-inf} = 0 contribution
    }
  }
  rep.identity_defect = std::abs(sum - 1.0);
  rep.support_flag = b_fail || outside > 1e-12;
  rep.inequality_value = (b_fail ? kPosInf : mean) / T;
  return rep;
}

namespace {

/// -min_alpha (alpha s + env(alpha)); also reports the argmin index.
double legendre(const std::vector<double>& alpha, const std::vector<double>& env, double s,
                int* argmin = nullptr) {
  double best = kPosInf;
  int arg = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double v = alpha[i] * s + env[i];
    if (v < best) {
      best = v;
      arg = static_cast<int>(i);
    }
  }
  if (argmin) *argmin = arg;
  return -best;
}

}  // namespace

RateFunction rate_function(const PressureCurve& curve, const std::vector<double>& s_grid,
                           std::optional<double> ep_lower_bound) {
  if (curve.alpha_grid.empty()) throw Error("rate_function: empty pressure curve");
  if (!curve.lower_certified)
    throw Error("rate_function: pressure curve has no certified lower envelope");

  std::vector<double> mid(curve.alpha_grid.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (curve.upper[i] + curve.lower[i]);

  RateFunction rf;
  rf.s_grid = s_grid;
  rf.local_only = true;
  for (double a : curve.alpha_grid)
    if (a < -1e-12 || a > 1 + 1e-12) rf.local_only = false;
  if (ep_lower_bound) {
    rf.validity_lo = -*ep_lower_bound;
    rf.validity_hi = *ep_lower_bound;
  }
  rf.I.reserve(s_grid.size());
  for (double s : s_grid) {
    int arg = 0;
    rf.I.push_back(legendre(curve.alpha_grid, mid, s, &arg));
    rf.argmin_alpha.push_back(arg);
    // larger e => smaller I, so the envelopes swap roles
    rf.I_err_lo.push_back(legendre(curve.alpha_grid, curve.upper, s));
    rf.I_err_hi.push_back(legendre(curve.alpha_grid, curve.lower, s));
  }
  return rf;
}

LdpReport ldp_empirical(const Process& p, double o_lo, double o_hi,
                        const std::vector<int>& T_values, const RateFunction& rate,
                        std::uint64_t cap) {
  if (!(o_lo < o_hi)) throw Error("ldp_empirical: empty interval");
  LdpReport rep;
  rep.o_lo = o_lo;
  rep.o_hi = o_hi;

  double inf_open = kPosInf, inf_closed = kPosInf;
  for (std::size_t i = 0; i < rate.s_grid.size(); ++i) {
    const double s = rate.s_grid[i];
    if (s > o_lo && s < o_hi) inf_open = std::min(inf_open, rate.I[i]);
    if (s >= o_lo - 1e-12 && s <= o_hi + 1e-12) inf_closed = std::min(inf_closed, rate.I[i]);
  }
  rep.theory_open = -inf_open;
  rep.theory_closed = -inf_closed;

  for (int T : T_values) {
    const SigmaLaw law = sigma_law(p, T, cap);
    double mass = 0;
    for (const SigmaAtom& a : law.atoms)
      if (a.s > o_lo && a.s < o_hi) mass += a.mass_p;
    LdpRow row;
    row.T = T;
    row.log_mass = mass > 0 ? std::log(mass) : kNegInf;
    row.empirical_rate = row.log_mass / T;
    rep.rows.push_back(row);
  }
  if (!rep.rows.empty()) rep.residual_at_max_T = rep.rows.back().empirical_rate - rep.theory_open;
  return rep;
}

}  // namespace rqm
