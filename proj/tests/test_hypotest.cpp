#include <doctest.h>

#include <cmath>
#include <random>

#include "rqm/hypotest.hpp"
#include "test_util.hpp"

using namespace rqm;

TEST_CASE("np test bernoulli T=1") {
  const Process p = bernoulli(0.7);
  const TestSet t = np_test(p, 1);
  CHECK(t.type_I == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(t.type_II == doctest::Approx(0.3).epsilon(1e-12));
  const PathTable table = enumerate_table(p, 1);
  CHECK(t.contains(table, 0));        // word (a): sigma > 0
  CHECK_FALSE(t.contains(table, 1));  // word (b)
}

TEST_CASE("np saturation equals chernoff") {
  for (std::uint64_t seed : {80ull, 81ull}) {
    const Process p = testutil::random_process(seed);
    for (int T = 1; T <= 4; ++T) {
      const PathTable table = enumerate_table(p, T);
      const TestSet t = np_test(table);
      CHECK(0.5 * (t.type_I + t.type_II) ==
            doctest::Approx(chernoff_cT(table)).epsilon(1e-10));
    }
  }
}

TEST_CASE("np optimality against random tests") {
  std::mt19937_64 rng(17);
  const Process p = testutil::random_process(82);
  for (int T = 1; T <= 4; ++T) {
    const PathTable table = enumerate_table(p, T);
    const double cT = chernoff_cT(table);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      double type_I = 0, type_II = 0;
      for (std::uint64_t i = 0; i < table.size(); ++i) {
        const double pm = table.log_p[i] == kNegInf ? 0 : std::exp(table.log_p[i]);
        const double ph = table.log_p_hat[i] == kNegInf ? 0 : std::exp(table.log_p_hat[i]);
        if (coin(rng))
          type_II += ph;
        else
          type_I += pm;
      }
      CHECK(0.5 * type_I + 0.5 * type_II >= cT - 1e-12);
    }
  }
}

TEST_CASE("chernoff cT symmetric and bounded") {
  const Process p = bernoulli(0.7);
  CHECK(chernoff_cT(p, 1) == doctest::Approx(0.3).epsilon(1e-12));
  const auto rep = chernoff_exponent(p, {1, 2, 3, 4, 5, 6}, 0.0);
  const double e_half = std::log(2 * std::sqrt(0.21));
  for (std::size_t i = 0; i < rep.rate.size(); ++i) {
    // log c_T <= e_T(1/2) - log 2
    CHECK(rep.rate[i] <= rep.upper_bound[i] + 1e-12);
  }
  CHECK(rep.e_half_upper == doctest::Approx(e_half).epsilon(1e-9));
  CHECK(rep.e_half_lower == doctest::Approx(e_half).epsilon(1e-9));
}

TEST_CASE("one-outcome process: cT = 1/2, exponent 0") {
  Instrument instr(2, {"x"}, {CPMap::scaled_identity(2, 1.0)});
  Process p(instr, 0.5 * Matrix::Identity(2, 2), Involution::identity(1));
  p.attach_canonical_or();
  for (int T = 1; T <= 4; ++T) CHECK(chernoff_cT(p, T) == doctest::Approx(0.5).epsilon(1e-12));
  const auto st = stein_sT(p, 3, 0.4);
  CHECK(st.value == doctest::Approx(1.0).epsilon(1e-12));  // must keep the unique word
}

TEST_CASE("stein greedy bernoulli") {
  const Process p = bernoulli(0.7);
  const auto res = stein_sT(p, 1, 0.35);
  CHECK(res.value == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(res.test.type_I <= 0.35 + 1e-12);
}

TEST_CASE("stein value non-increasing in eps") {
  const Process p = testutil::random_process(83);
  for (int T = 2; T <= 4; ++T) {
    double prev = kPosInf;
    for (double eps : {0.1, 0.2, 0.3, 0.5, 0.7}) {
      const double v = stein_sT(p, T, eps).value;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("greedy stein is within one atom of the exhaustive optimum") {
  // exhaustive subset search at T <= 3 on 2-letter alphabets
  for (double prob : {0.7, 0.55}) {
    const Process p = bernoulli(prob);
    for (int T = 1; T <= 3; ++T) {
      const PathTable table = enumerate_table(p, T);
      const std::uint64_t n = table.size();
      for (double eps : {0.2, 0.35, 0.5}) {
        double best = kPosInf;
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
          double miss = 0, ph = 0;
          for (std::uint64_t i = 0; i < n; ++i) {
            const double pm = std::exp(table.log_p[i]);
            const double qm = std::exp(table.log_p_hat[i]);
            if (mask & (1ull << i))
              ph += qm;
            else
              miss += pm;
          }
          if (miss <= eps + 1e-15) best = std::min(best, ph);
        }
        const double greedy = stein_sT(table, eps).value;
        double max_atom = 0;
        for (std::uint64_t i = 0; i < n; ++i)
          max_atom = std::max(max_atom, std::exp(table.log_p_hat[i]));
        CHECK(greedy >= best - 1e-12);
        CHECK(greedy <= best + max_atom + 1e-12);
      }
    }
  }
}

TEST_CASE("hoeffding curve of bernoulli") {
  const Process p = bernoulli(0.7);
  const auto curve = pressure_curve(p, default_alpha_grid(true), {1, 2, 3, 4, 5, 6}, 0.0);
  std::vector<double> s_grid;
  for (int i = 0; i <= 20; ++i) s_grid.push_back(0.1 * i);
  const auto h = hoeffding_psi(curve, s_grid);
  // psi(0) = -ep
  CHECK(h.psi.front() == doctest::Approx(-0.3389191441548815).epsilon(1e-4));
  // monotone increasing and concave, -e(0) = 0 asymptote from below
  for (std::size_t i = 1; i < h.psi.size(); ++i) CHECK(h.psi[i] >= h.psi[i - 1] - 1e-10);
  for (std::size_t i = 1; i + 1 < h.psi.size(); ++i)
    CHECK(h.psi[i - 1] + h.psi[i + 1] - 2 * h.psi[i] <= 1e-8);
  CHECK(h.psi.back() <= 1e-10);
  CHECK(h.psi.back() > -0.05);
}

TEST_CASE("one-outcome hoeffding is identically zero") {
  Instrument instr(1, {"x"}, {CPMap::scaled_identity(1, 1.0)});
  Process p(instr, Matrix::Identity(1, 1), Involution::identity(1));
  p.attach_canonical_or();
  const auto curve = pressure_curve(p, default_alpha_grid(true), {1, 2}, 0.0);
  const auto h = hoeffding_psi(curve, {0.0, 0.5, 1.0});
  for (double v : h.psi) CHECK(std::abs(v) < 1e-10);
}
