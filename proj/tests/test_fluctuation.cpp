#include <doctest.h>

#include <cmath>

#include "rqm/fluctuation.hpp"
#include "test_util.hpp"

using namespace rqm;

namespace {
const double kLog73 = std::log(7.0 / 3.0);
}

TEST_CASE("bernoulli sigma law at T=2") {
  const Process p = bernoulli(0.7);
  const SigmaLaw law = sigma_law(p, 2);
  REQUIRE(law.atoms.size() == 3);
  CHECK(law.atoms[0].s == doctest::Approx(-kLog73).epsilon(1e-12));
  CHECK(law.atoms[0].mass_p == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(law.atoms[1].s == doctest::Approx(0).epsilon(1e-12));
  CHECK(law.atoms[1].mass_p == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(law.atoms[2].s == doctest::Approx(kLog73).epsilon(1e-12));
  CHECK(law.atoms[2].mass_p == doctest::Approx(0.49).epsilon(1e-12));
  // symmetrized pairing: endpoints are exact negations
  CHECK(law.atoms[0].s == -law.atoms[2].s);
  double total = 0;
  for (const auto& a : law.atoms) total += a.mass_p;
  CHECK(total == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("fluctuation relation per atom") {
  const Process p = bernoulli(0.7);
  CHECK(check_fluctuation_relation(sigma_law(p, 2)) < 1e-10);
  // Q(-log(7/3)) = (9/49) * 0.49 = 0.09 explicitly
  const SigmaLaw law = sigma_law(p, 2);
  CHECK(law.atoms[0].mass_p ==
        doctest::Approx(std::exp(-2 * kLog73) * law.atoms[2].mass_p).epsilon(1e-12));
}

TEST_CASE("fluctuation relation on the random suite") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Process p = testutil::random_process(seed);
    for (int T = 1; T <= 5; ++T) CHECK(check_fluctuation_relation(sigma_law(p, T)) < 1e-10);
  }
}

TEST_CASE("theta-symmetric process has a single zero atom") {
  // Bernoulli(1/2) with swap involution: P = Phat
  const Process p = bernoulli(0.5);
  const SigmaLaw law = sigma_law(p, 4);
  REQUIRE(law.atoms.size() == 1);
  CHECK(law.atoms[0].s == doctest::Approx(0).epsilon(1e-12));
  CHECK(check_fluctuation_relation(law) < 1e-12);
}

TEST_CASE("jarzynski identity and inequality") {
  for (std::uint64_t seed : {70ull, 71ull}) {
    const Process p = testutil::random_process(seed);
    for (int T = 1; T <= 5; ++T) {
      const auto rep = check_jarzynski(p, T);
      CHECK(rep.identity_defect < 1e-10);
      CHECK(rep.inequality_value >= -1e-12);
    }
  }
  const auto rep = check_jarzynski(bernoulli(0.7), 4);
  CHECK(rep.inequality_value == doctest::Approx(0.3389191441548815).epsilon(1e-9));
  CHECK_FALSE(rep.support_flag);
}

TEST_CASE("rate function of bernoulli") {
  const Process p = bernoulli(0.7);
  const auto curve = pressure_curve(p, default_alpha_grid(false), {1, 2, 3, 4, 5, 6}, 0.0);
  const double ep = 0.3389191441548815;
  std::vector<double> s_grid;
  for (int i = -20; i <= 20; ++i) s_grid.push_back(ep * i / 20.0);
  const auto rf = rate_function(curve, s_grid, ep);
  // I(0) = -e(1/2) by symmetry
  const double i0 = rf.I[20];
  CHECK(i0 == doctest::Approx(-std::log(2 * std::sqrt(0.21))).epsilon(1e-6));
  // error bars bracket the midpoint value
  for (std::size_t i = 0; i < rf.I.size(); ++i) {
    CHECK(rf.I_err_lo[i] <= rf.I[i] + 1e-12);
    CHECK(rf.I_err_hi[i] >= rf.I[i] - 1e-12);
    CHECK(rf.I[i] >= -1e-10);
  }
  // Gallavotti-Cohen symmetry I(-s) - I(s) = s on the grid
  for (int i = 0; i <= 20; ++i) {
    const double s = s_grid[20 + i];
    CHECK(rf.I[20 - i] - rf.I[20 + i] == doctest::Approx(s).epsilon(1e-6));
  }
  // convexity
  for (std::size_t i = 1; i + 1 < rf.I.size(); ++i)
    CHECK(rf.I[i - 1] + rf.I[i + 1] - 2 * rf.I[i] >= -1e-8);
  // I vanishes at the certified ep within bracket error
  CHECK(rf.I.back() <= rf.I_err_hi.back() + 1e-6);
  CHECK(std::abs(rf.I.back()) < 1e-4);
  CHECK(rf.validity_hi == doctest::Approx(ep));
}

TEST_CASE("rate function requires a certified curve") {
  const auto curve = pressure_curve(bernoulli(0.7), {0.0, 0.5, 1.0}, {1, 2});
  CHECK_THROWS_AS(rate_function(curve, {0.0}), Error);
}

TEST_CASE("ldp empirical rates approach the rate function") {
  const Process p = bernoulli(0.7);
  const auto curve = pressure_curve(p, default_alpha_grid(false), {1, 2, 3, 4, 5, 6}, 0.0);
  const double ep = 0.3389191441548815;
  std::vector<double> s_grid;
  for (int i = -40; i <= 40; ++i) s_grid.push_back(ep * i / 40.0);
  const auto rf = rate_function(curve, s_grid, ep);

  // O containing ep: typical set, rate -> 0
  std::vector<int> Ts{4, 8, 12, 16, 20};
  const auto typical = ldp_empirical(p, ep - 0.05, ep + 0.05, Ts, rf);
  CHECK(std::abs(typical.rows.back().empirical_rate) < 0.1);  // O(log T / T) at T = 20

  // O = (-0.1, 0.1): rate tends to -I at the nearest edge
  const auto off = ldp_empirical(p, -0.1, 0.1, {20}, rf);
  CHECK(std::abs(off.rows.back().empirical_rate - off.theory_open) < 0.08);
  CHECK(off.theory_closed >= off.theory_open - 1e-12);
}
