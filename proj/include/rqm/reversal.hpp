#pragma once

#include "rqm/instrument.hpp"

namespace rqm {

/// Canonical outcome reversal:
///   Phihat_a[X] = rho^{-1/2} Phi_{theta(a)}^*[rho^{1/2} X rho^{1/2}] rho^{-1/2},
/// with state rho. In the fixed Kraus convention the reversed family is
///   What_{a,k} = rho^{1/2} V_{theta(a),k}^* rho^{-1/2}.
/// Unitality and invariance are re-validated on construction.
Process canonical_or(const Process& p);

struct OrVerification {
  bool passed = false;
  int T_checked = 0;
  double max_defect = 0;
  std::vector<int> worst_word;  // letters of the word realizing the max defect
};

/// Checks Phat_T(w) = P_T(Theta_T w) for all words up to T_max by enumeration.
OrVerification verify_or(const Process& p, const Process& q, int t_max, double tol,
                         std::uint64_t cap = (1ull << 21));

}  // namespace rqm
