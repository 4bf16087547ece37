#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "rqm/operator_core.hpp"

namespace rqm {

/// Self-inverse permutation of alphabet indices.
struct Involution {
  std::vector<int> perm;

  Involution() = default;
  explicit Involution(std::vector<int> p);
  static Involution identity(int n);

  int operator()(int a) const { return perm.at(a); }
  int size() const { return static_cast<int>(perm.size()); }
};

/// Alphabet-indexed family of CP maps whose total map is unital.
struct Instrument {
  int dim = 0;
  std::vector<std::string> alphabet;
  std::vector<CPMap> maps;

  Instrument() = default;
  Instrument(int dim, std::vector<std::string> alphabet, std::vector<CPMap> maps);

  int num_letters() const { return static_cast<int>(alphabet.size()); }
  int letter_index(const std::string& label) const;

  /// Total map Phi = sum_a Phi_a (Kraus families concatenated).
  CPMap total() const;
};

struct ValidationIssue {
  std::string what;
  double magnitude = 0;
};

struct ValidationReport {
  bool valid = false;
  double unitality_defect = 0;
  std::vector<double> letter_epsilons;  // min sp(Phi_a[1]) per letter
  bool all_letters_strictly_positive = false;
  std::vector<ValidationIssue> issues;
};

ValidationReport validate(const Instrument& instr, const Tolerances& tol = {});

/// Instrument + invariant state + involution: the full measurement process.
struct Process {
  Instrument instrument;
  Matrix rho;
  Involution theta;
  double lambda0 = 0;  // min sp(rho)
  bool relaxed = false;  // rho not Phi^*-invariant (weak-A mode); P_T is then not shift-invariant

  /// Attached outcome reversal; populated by attach_canonical_or or manually.
  std::shared_ptr<const Process> reversed;

  Process() = default;
  Process(Instrument instr, Matrix rho, Involution theta, bool relaxed = false);

  int dim() const { return instrument.dim; }
  int num_letters() const { return instrument.num_letters(); }
  const CPMap& map(int a) const { return instrument.maps.at(a); }

  /// Builds and attaches the canonical outcome reversal (no-op when present).
  void attach_canonical_or();
  const Process& or_process() const;
};

/// --- constructions -------------------------------------------------------

Instrument von_neumann(const Matrix& u, const std::vector<Matrix>& projections,
                       const std::vector<std::string>& labels = {});

Instrument ancilla(const Matrix& u, const Matrix& rho_probe,
                   const std::vector<Matrix>& probe_projections,
                   const std::vector<std::string>& labels = {});

/// Process of an irreducible row-stochastic chain: alphabet {(i,j) : P_ij > 0},
/// single Kraus sqrt(P_ij)|j><i| per letter, stationary rho, theta(i,j)=(j,i).
Process classical_markov(const Eigen::MatrixXd& p);

/// d=1 two-letter instrument with probabilities (p, 1-p) and swap involution.
Process bernoulli(double p);

/// n-state cycle chain: forward probability q, backward 1-q.
Process cycle_chain(int n, double q);

/// --- algebra of processes ------------------------------------------------

Process product(const Process& p1, const Process& p2);

/// Direct sum on H1 (+) H2 with state mu rho1 (+) (1-mu) rho2. Letters with
/// equal labels are identified; `declared_overlap` must list exactly those.
Process sum(const Process& p1, const Process& p2, double mu,
            const std::vector<std::string>& declared_overlap = {});

/// Phi_{2,b} = sum_a M_ab Phi_{1,a}; M is (old letters) x (new letters),
/// row-stochastic, and must satisfy M_{theta(a) theta'(b)} = M_{ab}.
Process coarse_grain(const Process& p, const Eigen::MatrixXd& m,
                     const std::vector<std::string>& new_alphabet,
                     const Involution& new_theta);

/// Requires Phi_{1,a} and Phi_2 to commute (checked on superoperator matrices).
Process composition(const Process& p1, const Process& p2, double commutation_tol = 1e-9);

enum class NoiseVariant {
  FreshLetter,  // {(1-eps) Phi_a} plus a fresh no-measurement letter eps Xi
  PerLetter,    // (1-eps) Phi_a + (eps/l) Psi_a per letter
};

Process deform_noise(const Process& p, double eps, const std::vector<CPMap>& xi,
                     NoiseVariant variant);

}  // namespace rqm
