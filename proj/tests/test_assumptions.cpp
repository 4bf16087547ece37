#include <doctest.h>

#include <cmath>

#include "rqm/assumptions.hpp"
#include "test_util.hpp"

using namespace rqm;

TEST_CASE("assumption A") {
  const auto bern = check_A(bernoulli(0.7));
  CHECK(bern.status == Status::Certified);
  CHECK(*bern.lambda0 == doctest::Approx(1.0));

  const auto cyc = check_A(cycle_chain(3, 0.8));
  CHECK(cyc.status == Status::Certified);
  CHECK(*cyc.lambda0 == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("assumption B algebraic and enumerative") {
  const auto bern = check_B(bernoulli(0.7), 5);
  CHECK(bern.status == Status::Certified);
  CHECK(bern.method == Method::Algebraic);

  // the cycle letters are not strictly positive, but supports match
  const auto cyc = check_B(cycle_chain(3, 0.8), 5);
  CHECK(cyc.status == Status::Inconclusive);
  CHECK(cyc.method == Method::Enumerative);
  CHECK(*cyc.horizon == 5);
}

TEST_CASE("assumption C: bernoulli certified, classical cycle inconclusive") {
  CHECK(check_C(bernoulli(0.7)).status == Status::Certified);
  // the doubled family of a classical chain leaves the diagonal invariant,
  // so the sufficient irreducibility test cannot decide
  CHECK(check_C(cycle_chain(3, 0.8)).status == Status::Inconclusive);
}

TEST_CASE("block-diagonal sum is inconclusive for C") {
  const Process s = sum(bernoulli(0.7), bernoulli(0.6), 0.5, {"a", "b"});
  CHECK(check_C(s).status == Status::Inconclusive);
}

TEST_CASE("C constants: product measures give exactly 1 at tau 0") {
  const auto cc = estimate_C_constants(bernoulli(0.7), 2, 3);
  CHECK(cc.tau == 0);
  CHECK(cc.C_tau == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cc.c == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("C constants for the 3-cycle need padding") {
  const auto cc = estimate_C_constants(cycle_chain(3, 0.8), 2, 3);
  CHECK(cc.per_tau[0] == 0.0);  // transition-incompatible adjacent words
  CHECK(cc.per_tau[2] > 0.0);
  CHECK(cc.tau >= 1);
  CHECK(cc.tau <= 2);
  CHECK(std::isfinite(cc.c));
}

TEST_CASE("assumption D: bernoulli certified with D0 = 1") {
  const auto cert = check_D(bernoulli(0.7), 3);
  CHECK(cert.status == Status::Certified);
  CHECK(*cert.D0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("assumption D refuted for the cycle with a witness") {
  const auto cert = check_D(cycle_chain(3, 0.8), 2);
  CHECK(cert.status == Status::Refuted);
  REQUIRE(cert.witness.has_value());
  // the witness replay gives a structural zero with positive halves
  const Process p = cycle_chain(3, 0.8);
  const Word& w = *cert.witness;
  CHECK(log_prob(p, w) == kNegInf);
}

TEST_CASE("per-letter noise restores D") {
  const Process p = cycle_chain(3, 0.8);
  std::vector<CPMap> psi;
  for (int a = 0; a < p.num_letters(); ++a) {
    // positivity-improving blend target: uniform depolarizer
    std::vector<Matrix> kraus;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Matrix e = Matrix::Zero(3, 3);
        e(i, j) = 1.0 / std::sqrt(3.0);
        kraus.push_back(e);
      }
    psi.emplace_back(3, kraus);
  }
  const Process blended = deform_noise(p, 0.2, psi, NoiseVariant::PerLetter);
  CHECK(check_D(blended, 2).status == Status::Certified);
  CHECK(check_C(blended).status == Status::Certified);
}

TEST_CASE("ergodicity report") {
  const auto bern = ergodicity_report(bernoulli(0.7));
  CHECK(bern.ergodic);
  CHECK(bern.mixing);

  const auto cyc = ergodicity_report(cycle_chain(3, 0.8));
  CHECK(cyc.ergodic);

  const auto s = ergodicity_report(sum(bernoulli(0.7), bernoulli(0.6), 0.5, {"a", "b"}));
  CHECK_FALSE(s.ergodic);  // eigenvalue 1 degenerate on the direct sum
}

TEST_CASE("iid cylinder correlations vanish") {
  const Process p = bernoulli(0.7);
  const std::vector<double> f{1.0, -1.0};
  for (int n = 1; n <= 3; ++n)
    CHECK(cylinder_correlation(p, f, 1, f, 1, n) == doctest::Approx(0).epsilon(1e-10));
  // n = 0 gives the variance, strictly positive
  CHECK(cylinder_correlation(p, f, 1, f, 1, 0) > 0.5);
}

TEST_CASE("B refuted for a one-way transition") {
  // deterministic 3-cycle with only forward edges and theta = id: words are
  // strictly increasing, their reversals impossible
  std::vector<CPMap> maps;
  std::vector<std::string> labels;
  for (int i = 0; i < 3; ++i) {
    Matrix v = Matrix::Zero(3, 3);
    v((i + 1) % 3, i) = 1;
    maps.emplace_back(3, std::vector<Matrix>{v});
    labels.push_back(std::to_string(i) + ">" + std::to_string((i + 1) % 3));
  }
  Process p(Instrument(3, labels, maps), Matrix::Identity(3, 3) / 3.0,
            Involution::identity(3));
  p.attach_canonical_or();
  const auto cert = check_B(p, 4);
  CHECK(cert.status == Status::Refuted);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->size() <= 2);
}
