#include "rqm/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace rqm {

CPMap::CPMap(int dim_, std::vector<Matrix> kraus_) : dim(dim_), kraus(std::move(kraus_)) {
  if (dim <= 0) throw DimensionMismatch("CPMap dimension must be positive");
  if (kraus.empty()) throw Error("CPMap requires a nonempty Kraus family");
  for (const auto& v : kraus)
    if (v.rows() != dim || v.cols() != dim)
      throw DimensionMismatch("Kraus operator dimension mismatch");
}

CPMap CPMap::from_channel_kraus(int dim, const std::vector<Matrix>& w) {
  std::vector<Matrix> v;
  v.reserve(w.size());
  for (const auto& m : w) v.push_back(m.adjoint());
  return CPMap(dim, std::move(v));
}

CPMap CPMap::scaled_identity(int dim, double factor) {
  return CPMap(dim, {std::sqrt(factor) * Matrix::Identity(dim, dim)});
}

Matrix CPMap::apply_heisenberg(const Matrix& x) const {
  if (x.rows() != dim || x.cols() != dim)
    throw DimensionMismatch("operator dimension does not match map dimension");
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& v : kraus) out += v.adjoint() * x * v;
  return out;
}

Matrix CPMap::apply_schrodinger(const Matrix& x) const {
  if (x.rows() != dim || x.cols() != dim)
    throw DimensionMismatch("operator dimension does not match map dimension");
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& v : kraus) out += v * x * v.adjoint();
  return out;
}

Matrix CPMap::heisenberg_unit() const {
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& v : kraus) out += v.adjoint() * v;
  return out;
}

double CPMap::unitality_defect() const {
  return (heisenberg_unit() - Matrix::Identity(dim, dim)).norm();
}

bool CPMap::is_unital(double tol) const { return unitality_defect() <= tol; }

CPMap CPMap::scaled(double factor) const {
  if (factor < 0) throw Error("CPMap scale factor must be nonnegative");
  std::vector<Matrix> v;
  v.reserve(kraus.size());
  const double s = std::sqrt(factor);
  for (const auto& k : kraus) v.push_back(s * k);
  return CPMap(dim, std::move(v));
}

Matrix apply(const CPMap& map, const Matrix& x, Picture picture) {
  return picture == Picture::Heisenberg ? map.apply_heisenberg(x) : map.apply_schrodinger(x);
}

Matrix superoperator_matrix(const CPMap& map, Picture picture) {
  const int d = map.dim;
  Matrix m = Matrix::Zero(d * d, d * d);
  for (const auto& v : map.kraus) {
    if (picture == Picture::Heisenberg) {
      // vec(V^* X V) = (V^T (x) V^*) vec(X)
      m += kron(v.transpose(), v.adjoint());
    } else {
      // vec(V X V^*) = (conj(V) (x) V) vec(X)
      m += kron(v.conjugate(), v);
    }
  }
  return m;
}

SpectralReport spectral_report(const CPMap& map, double tol) {
  SpectralReport rep;
  rep.unital = map.is_unital();
  const Matrix m = superoperator_matrix(map, Picture::Heisenberg);
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error("eigen-solver failed on superoperator matrix");
  const Vector ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());

  std::vector<double> moduli;
  moduli.reserve(rep.eigenvalues.size());
  for (const auto& z : rep.eigenvalues) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  rep.spectral_radius = moduli.front();

  int near_one = 0;
  for (const auto& z : rep.eigenvalues)
    if (std::abs(z - Complex(1, 0)) <= tol) ++near_one;
  rep.eigenvalue_one_simple = (near_one == 1);

  for (double r : moduli)
    if (r >= 1.0 - tol) ++rep.peripheral_count;

  if (moduli.size() == 1) {
    rep.no_subleading = true;
    rep.gap = kPosInf;
  } else {
    // second-largest modulus strictly below the peripheral cluster
    double second = 0;
    for (double r : moduli)
      if (r < 1.0 - tol) {
        second = r;
        break;
      }
    if (second == 0 && rep.peripheral_count == static_cast<int>(moduli.size())) {
      rep.gap = 0;  // all eigenvalues peripheral
    } else if (second == 0) {
      rep.no_subleading = true;
      rep.gap = kPosInf;
    } else {
      rep.gap = rep.peripheral_count == 1 ? -std::log(second) : 0.0;
    }
  }
  return rep;
}

InvariantStateResult invariant_state(const CPMap& map, const Tolerances& tol) {
  const int d = map.dim;
  const Matrix m = superoperator_matrix(map, Picture::Schrodinger);
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw Error("eigen-solver failed on superoperator matrix");

  int fixed_dim = 0;
  int best = -1;
  double best_dist = kPosInf;
  for (int i = 0; i < m.rows(); ++i) {
    const double dist = std::abs(solver.eigenvalues()(i) - Complex(1, 0));
    if (dist <= tol.eig_cluster) ++fixed_dim;
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  if (fixed_dim == 0)
    throw NotPositive("no eigenvalue of the Schroedinger superoperator is close to 1");
  if (fixed_dim > 1) throw NonUniqueInvariantState(fixed_dim);

  Matrix cand = hermitize(unvec(solver.eigenvectors().col(best), d));
  // Fix overall sign so the trace is positive.
  if (cand.trace().real() < 0) cand = -cand;

  Eigen::SelfAdjointEigenSolver<Matrix> es(cand);
  InvariantStateResult result;
  const double tr = cand.trace().real();
  if (std::abs(tr) < 1e-14) throw NotPositive("invariant-state candidate has vanishing trace");
  result.min_eigenvalue_raw = es.eigenvalues().minCoeff() / tr;

  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  if (clipped.sum() <= 0) throw NotPositive("invariant-state candidate has no positive part");
  clipped /= clipped.sum();
  result.rho = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  result.rho = hermitize(result.rho);
  result.min_eigenvalue = clipped.minCoeff();

  if (result.min_eigenvalue_raw < -1e-6)
    throw NotPositive("invariant-state candidate fails positivity beyond tolerance");
  const double defect = (map.apply_schrodinger(result.rho) - result.rho).norm();
  if (defect > tol.invariance)
    throw NotPositive("projected invariant state fails re-verification, defect " +
                      std::to_string(defect));
  return result;
}

namespace {

// Orthonormal span tracker over C^{D^2} with Gram-Schmidt insertion.
class SpanBasis {
 public:
  bool insert(const Matrix& op) {
    Vector v = vec(op);
    for (const auto& b : basis_) v -= b.dot(v) * b;
    const double n = v.norm();
    if (n < 1e-10) return false;
    // second pass for numerical orthogonality
    for (const auto& b : basis_) v -= b.dot(v) * b;
    const double n2 = v.norm();
    if (n2 < 1e-10) return false;
    basis_.push_back(v / n2);
    return true;
  }
  std::size_t size() const { return basis_.size(); }

 private:
  std::vector<Vector> basis_;
};

}  // namespace

bool is_irreducible_family(const std::vector<Matrix>& ops) {
  if (ops.empty()) throw Error("is_irreducible_family requires a nonempty family");
  const int d = static_cast<int>(ops.front().rows());
  for (const auto& op : ops)
    if (op.rows() != d || op.cols() != d)
      throw DimensionMismatch("family members must share a common dimension");

  const std::size_t full = static_cast<std::size_t>(d) * d;
  SpanBasis span;
  std::vector<Matrix> members;
  auto add = [&](const Matrix& m) {
    if (span.insert(m)) {
      members.push_back(m);
      return true;
    }
    return false;
  };

  add(Matrix::Identity(d, d));
  for (const auto& op : ops) add(op);

  // Closure under products; span dimension is monotone and bounded by d^2.
  std::size_t scanned = 0;
  while (scanned < members.size() && span.size() < full) {
    const Matrix m = members[scanned++];
    for (const auto& g : ops) {
      if (span.size() >= full) break;
      add(g * m);
      add(m * g);
    }
  }
  return span.size() == full;
}

PositivityImprovingResult is_positivity_improving(const CPMap& map, int trials,
                                                  std::uint64_t rng_seed) {
  if (trials < 1) throw Error("is_positivity_improving requires trials >= 1");
  const int d = map.dim;
  const int k = static_cast<int>(map.kraus.size());
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PositivityImprovingResult result;
  for (int t = 0; t < trials; ++t) {
    Vector phi(d);
    for (int i = 0; i < d; ++i) phi(i) = Complex(gauss(rng), gauss(rng));
    phi.normalize();
    // Phi[|phi><phi|] = sum_k (V_k^* phi)(V_k^* phi)^*; strict positivity of the
    // image is rank d of the stacked columns.
    Matrix cols(d, k);
    for (int j = 0; j < k; ++j) cols.col(j) = map.kraus[j].adjoint() * phi;
    Eigen::ColPivHouseholderQR<Matrix> qr(cols);
    qr.setThreshold(1e-10);
    if (qr.rank() < d) {
      result.improving = false;
      result.witness = phi;
      return result;
    }
  }
  result.improving = true;
  return result;
}

StrictPositivityResult is_strictly_positive(const CPMap& map, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(map.heisenberg_unit());
  StrictPositivityResult r;
  r.epsilon = es.eigenvalues().minCoeff();
  r.strictly_positive = r.epsilon > tol;
  return r;
}

CPMap tensor(const CPMap& a, const CPMap& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& v : a.kraus)
    for (const auto& w : b.kraus) kraus.push_back(kron(v, w));
  return CPMap(a.dim * b.dim, std::move(kraus));
}

CPMap compose(const CPMap& a, const CPMap& b) {
  if (a.dim != b.dim) throw DimensionMismatch("compose requires equal dimensions");
  // (a o b)[X] = a[b[X]] = sum_{i,j} (W_j V_i)^* X (W_j V_i)
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus.size() * b.kraus.size());
  for (const auto& v : a.kraus)
    for (const auto& w : b.kraus) kraus.push_back(w * v);
  return CPMap(a.dim, std::move(kraus));
}

}  // namespace rqm
