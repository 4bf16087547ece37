#include <doctest.h>

#include <cmath>
#include <random>

#include "rqm/entropic.hpp"
#include "test_util.hpp"

using namespace rqm;

namespace {
const double kLog73 = std::log(7.0 / 3.0);
}

TEST_CASE("sigma closed forms") {
  const Process p = bernoulli(0.7);
  CHECK(sigma(p, {0, 0, 1}) == doctest::Approx(kLog73).epsilon(1e-12));
  CHECK(sigma(p, {0, 1}) == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("mean sigma additivity for the iid process") {
  const Process p = bernoulli(0.7);
  const double per_letter = 0.4 * kLog73;
  for (int T = 1; T <= 6; ++T)
    CHECK(mean_sigma(p, T).mean_sigma == doctest::Approx(T * per_letter).epsilon(1e-10));
  CHECK(mean_sigma(p, 3).mean_sigma == doctest::Approx(1.0167574324646445).epsilon(1e-10));
}

TEST_CASE("mean sigma monotone in T") {
  for (std::uint64_t seed : {50ull, 51ull, 52ull}) {
    const Process p = testutil::random_process(seed);
    double prev = 0;
    for (int T = 1; T <= 5; ++T) {
      const double cur = mean_sigma(p, T).mean_sigma;
      CHECK(cur >= prev - 1e-9);
      CHECK(cur >= -1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("ep bounds bernoulli") {
  const Process p = bernoulli(0.7);
  const auto rep = ep_bounds(p, 4);
  CHECK(rep.ep_lower == doctest::Approx(0.3389191441548815).epsilon(1e-9));
  CHECK(rep.lower_seq[0] == doctest::Approx(0.3389191441548815).epsilon(1e-9));
  REQUIRE(rep.ceiling.has_value());
  CHECK(*rep.ceiling == doctest::Approx(-std::log(0.3)).epsilon(1e-9));
  CHECK(rep.ep_lower <= *rep.ceiling);
  CHECK_FALSE(rep.b_violated);
}

TEST_CASE("one-outcome process has zero entropy production") {
  Instrument instr(2, {"x"}, {CPMap::scaled_identity(2, 1.0)});
  Process p(instr, 0.5 * Matrix::Identity(2, 2), Involution::identity(1));
  p.attach_canonical_or();
  const auto rep = ep_bounds(p, 4);
  for (double v : rep.mean_sigma_seq) CHECK(v == doctest::Approx(0).epsilon(1e-12));
  CHECK(rep.ep_lower <= 1e-12);
}

TEST_CASE("monte carlo estimate brackets the closed form") {
  const Process p = bernoulli(0.7);
  const auto est = ep_monte_carlo(p, 200, 2000, 7);
  CHECK_FALSE(est.ergodic_warning);
  CHECK(est.ci_lo < 0.3389191441548815);
  CHECK(est.ci_hi > 0.3389191441548815);
}

TEST_CASE("renyi pressure closed form and symmetry") {
  const Process p = bernoulli(0.7);
  const double e_half = std::log(2 * std::sqrt(0.21));
  for (int T = 1; T <= 6; ++T) {
    const PathTable t = enumerate_table(p, T);
    CHECK(renyi_pressure(t, 0.5) == doctest::Approx(T * e_half).epsilon(1e-10));
    CHECK(renyi_pressure(t, 0.0) == 0.0);
    CHECK(renyi_pressure(t, 1.0) == 0.0);
    CHECK(renyi_pressure(t, 0.3) ==
          doctest::Approx(renyi_pressure(t, 0.7)).epsilon(1e-10));
  }
  CHECK(renyi_pressure(p, 0.5, 6) == doctest::Approx(-0.5230601614343334).epsilon(1e-9));
}

TEST_CASE("renyi pressure symmetry and convexity on random processes") {
  for (std::uint64_t seed : {60ull, 61ull}) {
    const Process p = testutil::random_process(seed);
    const PathTable t = enumerate_table(p, 4);
    std::vector<double> es;
    for (int i = 0; i <= 40; ++i) {
      const double a = i / 40.0;
      es.push_back(renyi_pressure(t, a));
      CHECK(es.back() <= 1e-12);  // e_T <= 0 on [0,1]
      const double mirror = renyi_pressure(t, 1 - a);
      CHECK(std::abs(es.back() - mirror) < 1e-10);
    }
    for (std::size_t i = 1; i + 1 < es.size(); ++i)
      CHECK(es[i - 1] + es[i + 1] - 2 * es[i] >= -1e-8);  // convexity
  }
}

TEST_CASE("renyi pressure slope at alpha=1 matches mean sigma of the reversal") {
  const Process p = bernoulli(0.7);
  const PathTable t = enumerate_table(p, 3);
  const double h = 1e-5;
  const double slope = (renyi_pressure(t, 1.0) - renyi_pressure(t, 1.0 - h)) / h;
  // d/d alpha S_alpha(P|Q) at 1 equals S(Q|P); here S(Phat|P) = S(P|Phat) by symmetry
  CHECK(slope == doctest::Approx(mean_sigma(t, 1.0).mean_sigma).epsilon(1e-3));
}

TEST_CASE("renyi pressure outside [0,1] needs support equality") {
  const Process cyc = cycle_chain(3, 0.8);
  const PathTable t = enumerate_table(cyc, 3);
  // cycle supports match (reversed transitions exist), so finite and >= 0
  const double e2 = renyi_pressure(t, 2.0);
  CHECK(e2 >= -1e-12);
  CHECK(std::isfinite(e2));
}

TEST_CASE("pressure curve fekete sandwich") {
  const Process p = bernoulli(0.7);
  std::vector<int> Ts{1, 2, 3, 4, 5, 6};
  const auto curve = pressure_curve(p, default_alpha_grid(false), Ts, 0.0);
  REQUIRE(curve.lower_certified);
  const double e_half = std::log(2 * std::sqrt(0.21));
  const int i = curve.index_of_alpha(0.5);
  CHECK(curve.lower[i] <= e_half + 1e-12);
  CHECK(curve.upper[i] >= e_half - 1e-12);
  CHECK(curve.bracket_width[i] < 1e-9);  // lambda0 = 1 and c = 0: brackets collapse
  for (std::size_t k = 0; k < curve.alpha_grid.size(); ++k)
    CHECK(curve.upper[k] >= curve.lower[k] - 1e-12);
}

TEST_CASE("pressure curve suppresses lower bounds without a certificate") {
  const Process p = bernoulli(0.7);
  const auto curve = pressure_curve(p, {0.5}, {1, 2});
  CHECK_FALSE(curve.lower_certified);
  CHECK(curve.bracket_width.empty());
}

TEST_CASE("tilted measure endpoints and normalization") {
  const Process p = bernoulli(0.7);
  const PathTable t = enumerate_table(p, 3);
  const TiltedMeasure q0 = tilted_measure(t, 0.0);
  for (std::uint64_t i = 0; i < t.size(); ++i)
    CHECK(q0.log_q[i] == doctest::Approx(t.log_p[i]).epsilon(1e-12));
  const TiltedMeasure q1 = tilted_measure(t, 1.0);
  for (std::uint64_t i = 0; i < t.size(); ++i)
    CHECK(q1.log_q[i] == doctest::Approx(t.log_p_hat[i]).epsilon(1e-12));
  const TiltedMeasure qh = tilted_measure(t, 0.5);
  CHECK(qh.log_norm_defect < 1e-10);
  // Bernoulli(0.7) tilted at 1/2 is Bernoulli(1/2) per letter
  for (std::uint64_t i = 0; i < t.size(); ++i)
    CHECK(std::exp(qh.log_q[i]) == doctest::Approx(1.0 / 8).epsilon(1e-10));
}

TEST_CASE("gibbs variational principle") {
  const Process p = bernoulli(0.7);
  const PathTable t = enumerate_table(p, 3);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> f(t.size());
  for (double& x : f) x = unif(rng);
  // log sum e^f dP
  std::vector<double> terms;
  for (std::uint64_t i = 0; i < t.size(); ++i) terms.push_back(f[i] + t.log_p[i]);
  const double lhs = logsumexp(terms);
  // the maximizer is dQ = e^f dP / normalization
  std::vector<double> log_q(t.size());
  for (std::uint64_t i = 0; i < t.size(); ++i) log_q[i] = f[i] + t.log_p[i] - lhs;
  double value = 0;
  for (std::uint64_t i = 0; i < t.size(); ++i) {
    const double q = std::exp(log_q[i]);
    value += q * f[i] - q * (log_q[i] - t.log_p[i]);
  }
  CHECK(value == doctest::Approx(lhs).epsilon(1e-8));
  // any other sampled measure stays below
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(t.size());
    double norm = 0;
    for (double& x : w) {
      x = std::exp(unif(rng));
      norm += x;
    }
    double other = 0;
    for (std::uint64_t i = 0; i < t.size(); ++i) {
      const double q = w[i] / norm;
      other += q * f[i] - q * (std::log(q) - t.log_p[i]);
    }
    CHECK(other <= lhs + 1e-10);
  }
}

TEST_CASE("shannon and ks entropy") {
  const Process p = bernoulli(0.7);
  const double h = -(0.7 * std::log(0.7) + 0.3 * std::log(0.3));
  const auto seq = ks_entropy_estimate(p, {1, 2, 3, 4});
  for (double v : seq) CHECK(v == doctest::Approx(h).epsilon(1e-10));
  CHECK(h == doctest::Approx(0.6108643020548935).epsilon(1e-12));
}
