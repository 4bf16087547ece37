#pragma once

#include <random>

#include "rqm/reversal.hpp"

namespace rqm::testutil {

inline Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Involution random_involution(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n, -1);
  std::vector<int> free;
  for (int i = 0; i < n; ++i) free.push_back(i);
  while (!free.empty()) {
    const int a = free.front();
    free.erase(free.begin());
    if (free.empty() || std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      perm[a] = a;
    } else {
      const int k = std::uniform_int_distribution<int>(0, static_cast<int>(free.size()) - 1)(rng);
      const int b = free[k];
      free.erase(free.begin() + k);
      perm[a] = b;
      perm[b] = a;
    }
  }
  return Involution(perm);
}

/// Random unital instrument with d <= 3, l <= 3: raw Gaussian Kraus families
/// normalized by A -> A S^{-1/2} with S = sum A^* A. Retries until the total
/// map has a unique, reasonably faithful invariant state.
inline Process random_process(std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(seed * 7919 + attempt);
    const int d = std::uniform_int_distribution<int>(1, 3)(rng);
    const int ell = std::uniform_int_distribution<int>(2, 3)(rng);
    std::vector<std::vector<Matrix>> raw(ell);
    Matrix s = Matrix::Zero(d, d);
    for (int a = 0; a < ell; ++a) {
      const int nk = std::uniform_int_distribution<int>(1, 2)(rng);
      for (int k = 0; k < nk; ++k) {
        raw[a].push_back(random_matrix(d, rng));
        s += raw[a].back().adjoint() * raw[a].back();
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(s));
    const Matrix s_inv_sqrt = es.eigenvectors() *
                              es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                              es.eigenvectors().adjoint();
    std::vector<CPMap> maps;
    std::vector<std::string> labels;
    for (int a = 0; a < ell; ++a) {
      std::vector<Matrix> kraus;
      for (const Matrix& m : raw[a]) kraus.push_back(m * s_inv_sqrt);
      maps.emplace_back(d, std::move(kraus));
      labels.push_back(std::string(1, static_cast<char>('a' + a)));
    }
    try {
      Instrument instr(d, labels, maps);
      const auto inv = invariant_state(instr.total());
      if (inv.min_eigenvalue < 1e-6) continue;
      Process p(std::move(instr), inv.rho, random_involution(ell, rng));
      p.attach_canonical_or();
      return p;
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace rqm::testutil
