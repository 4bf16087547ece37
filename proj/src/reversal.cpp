#include "rqm/reversal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "rqm/pathspace.hpp"

namespace rqm {

Process canonical_or(const Process& p) {
  if (p.relaxed)
    throw Error("canonical outcome reversal requires an invariant state");
  const int d = p.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(p.rho));
  const double floor = p.lambda0 * 1e-6;
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
  Matrix sqrt_rho = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  Matrix inv_sqrt_rho =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();

  std::vector<CPMap> maps;
  maps.reserve(p.num_letters());
  for (int a = 0; a < p.num_letters(); ++a) {
    const CPMap& src = p.map(p.theta(a));
    std::vector<Matrix> kraus;
    kraus.reserve(src.kraus.size());
    for (const auto& v : src.kraus) kraus.push_back(sqrt_rho * v.adjoint() * inv_sqrt_rho);
    maps.emplace_back(d, std::move(kraus));
  }
  Instrument instr(d, p.instrument.alphabet, maps);

  const auto rep = validate(instr);
  if (!rep.valid)
    throw Error("canonical OR failed re-validation (unitality defect " +
                std::to_string(rep.unitality_defect) + ")");
  Process out(std::move(instr), p.rho, p.theta);
  return out;
}

Word reverse_word(const Word& w, const Involution& theta) {
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = theta(w[w.size() - 1 - i]);
  return out;
}

OrVerification verify_or(const Process& p, const Process& q, int t_max, double tol,
                         std::uint64_t cap) {
  if (p.instrument.alphabet != q.instrument.alphabet)
    throw Error("verify_or requires a shared alphabet");
  if (p.theta.perm != q.theta.perm) throw Error("verify_or requires a shared involution");

  OrVerification rep;
  rep.passed = true;
  for (int t = 1; t <= t_max; ++t) {
    const PathTable fwd = enumerate_table(p, t, cap);
    const PathTable rev = enumerate_table(q, t, cap);
    for (std::uint64_t i = 0; i < fwd.size(); ++i) {
      const Word w = fwd.word_at(i);
      const Word rw = reverse_word(w, p.theta);
      const double p_rev = std::exp(fwd.log_p[fwd.index_of(rw)]);
      const double q_fwd = std::exp(rev.log_p[i]);
      const double defect = std::abs(q_fwd - p_rev);
      if (defect > rep.max_defect) {
        rep.max_defect = defect;
        rep.worst_word = w;
      }
    }
    rep.T_checked = t;
  }
  rep.passed = rep.max_defect <= tol;
  return rep;
}

}  // namespace rqm
