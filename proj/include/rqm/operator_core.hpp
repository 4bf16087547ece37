#pragma once

#include <cstdint>
#include <optional>

#include "rqm/core.hpp"

namespace rqm {

/// Completely positive map held as a finite Kraus family.
///
/// Convention (fixed throughout the library): the Heisenberg action is
///   Phi[X] = sum_k V_k^* X V_k,
/// unital when sum_k V_k^* V_k = 1. The Schroedinger dual is
///   Phi^*[rho] = sum_k V_k rho V_k^*.
/// Channel-style Kraus data {W_k} with Phi[X] = sum_k W_k X W_k^* is converted
/// on ingestion via V_k = W_k^adjoint (see from_channel_kraus).
struct CPMap {
  int dim = 0;
  std::vector<Matrix> kraus;

  CPMap() = default;
  CPMap(int dim, std::vector<Matrix> kraus);

  static CPMap from_channel_kraus(int dim, const std::vector<Matrix>& w);
  static CPMap scaled_identity(int dim, double factor);

  Matrix apply_heisenberg(const Matrix& x) const;
  Matrix apply_schrodinger(const Matrix& x) const;

  /// Phi[1] = sum V^* V (selfadjoint, PSD).
  Matrix heisenberg_unit() const;

  double unitality_defect() const;
  bool is_unital(double tol = Tolerances{}.unitality) const;

  /// Scale the map by a nonnegative factor (Kraus scaled by sqrt(factor)).
  CPMap scaled(double factor) const;
};

enum class Picture { Heisenberg, Schrodinger };

Matrix apply(const CPMap& map, const Matrix& x, Picture picture);

/// Matrix of the map in the fixed column-stacking convention:
/// vec(Phi[X]) = M vec(X).
Matrix superoperator_matrix(const CPMap& map, Picture picture = Picture::Heisenberg);

struct SpectralReport {
  double spectral_radius = 0;
  bool eigenvalue_one_simple = false;
  int peripheral_count = 0;       // eigenvalues with |z| >= 1 - tol
  double gap = 0;                 // -log of second-largest modulus
  bool no_subleading = false;     // single eigenvalue: gap is +inf by convention
  bool unital = false;
  std::vector<Complex> eigenvalues;
};

SpectralReport spectral_report(const CPMap& map, double tol = Tolerances{}.eig_cluster);

struct InvariantStateResult {
  Matrix rho;
  double min_eigenvalue = 0;       // after projection
  double min_eigenvalue_raw = 0;   // before clipping
};

/// Fixed point of the Schroedinger superoperator, Hermitized, positive-part
/// projected and re-verified. Throws NonUniqueInvariantState when eigenvalue 1
/// is degenerate and NotPositive when the candidate fails positivity.
InvariantStateResult invariant_state(const CPMap& map, const Tolerances& tol = {});

/// Burnside criterion: true iff the unital algebra generated by the family is
/// the full matrix algebra, decided by iterated span closure under products.
bool is_irreducible_family(const std::vector<Matrix>& ops);

struct PositivityImprovingResult {
  bool improving = false;
  std::optional<Vector> witness;  // unit vector with rank-deficient image, when found
};

/// Randomized check: Phi[|phi><phi|] > 0 for `trials` random unit vectors phi.
/// A returned `false` is exact (the witness certifies it); `true` is
/// probabilistic, the failure set being a proper algebraic variety.
PositivityImprovingResult is_positivity_improving(const CPMap& map, int trials,
                                                  std::uint64_t rng_seed);

struct StrictPositivityResult {
  bool strictly_positive = false;
  double epsilon = 0;  // min sp(Phi[1])
};

StrictPositivityResult is_strictly_positive(const CPMap& map,
                                            double tol = Tolerances{}.strict_positivity);

CPMap tensor(const CPMap& a, const CPMap& b);

/// compose(a, b) realizes a o b: (a o b)[X] = a[b[X]].
CPMap compose(const CPMap& a, const CPMap& b);

}  // namespace rqm
