#include "rqm/instrument.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "rqm/reversal.hpp"

namespace rqm {

Involution::Involution(std::vector<int> p) : perm(std::move(p)) {
  const int n = static_cast<int>(perm.size());
  for (int i = 0; i < n; ++i) {
    if (perm[i] < 0 || perm[i] >= n || perm[perm[i]] != i)
      throw Error("involution must be a self-inverse permutation");
  }
}

Involution Involution::identity(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return Involution(p);
}

Instrument::Instrument(int dim_, std::vector<std::string> alphabet_, std::vector<CPMap> maps_)
    : dim(dim_), alphabet(std::move(alphabet_)), maps(std::move(maps_)) {
  if (alphabet.empty() || alphabet.size() != maps.size())
    throw Error("instrument needs matching nonempty alphabet and map list");
  std::set<std::string> seen(alphabet.begin(), alphabet.end());
  if (seen.size() != alphabet.size()) throw Error("instrument outcome labels must be distinct");
  for (const auto& m : maps)
    if (m.dim != dim) throw DimensionMismatch("instrument letters must share a dimension");
}

int Instrument::letter_index(const std::string& label) const {
  for (int i = 0; i < num_letters(); ++i)
    if (alphabet[i] == label) return i;
  throw Error("unknown outcome label: " + label);
}

CPMap Instrument::total() const {
  std::vector<Matrix> kraus;
  for (const auto& m : maps) kraus.insert(kraus.end(), m.kraus.begin(), m.kraus.end());
  return CPMap(dim, std::move(kraus));
}

ValidationReport validate(const Instrument& instr, const Tolerances& tol) {
  ValidationReport rep;
  Matrix sum = Matrix::Zero(instr.dim, instr.dim);
  rep.all_letters_strictly_positive = true;
  for (int a = 0; a < instr.num_letters(); ++a) {
    const auto& m = instr.maps[a];
    sum += m.heisenberg_unit();
    const auto sp = is_strictly_positive(m, tol.strict_positivity);
    rep.letter_epsilons.push_back(sp.epsilon);
    if (!sp.strictly_positive) rep.all_letters_strictly_positive = false;
    if (m.kraus.empty())
      rep.issues.push_back({"letter " + instr.alphabet[a] + " has no Kraus operators", 0});
  }
  rep.unitality_defect = (sum - Matrix::Identity(instr.dim, instr.dim)).norm();
  if (rep.unitality_defect > tol.unitality)
    rep.issues.push_back({"unitality defect", rep.unitality_defect});
  rep.valid = rep.issues.empty();
  return rep;
}

Process::Process(Instrument instr, Matrix rho_, Involution theta_, bool relaxed_)
    : instrument(std::move(instr)), rho(std::move(rho_)), theta(std::move(theta_)),
      relaxed(relaxed_) {
  if (rho.rows() != instrument.dim || rho.cols() != instrument.dim)
    throw DimensionMismatch("state dimension does not match instrument");
  if (theta.size() != instrument.num_letters())
    throw Error("involution size does not match alphabet");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho));
  lambda0 = es.eigenvalues().minCoeff();
  if (lambda0 <= 0) throw NotPositive("process state must be strictly positive");
  if (!relaxed) {
    const double defect = (instrument.total().apply_schrodinger(rho) - rho).norm();
    if (defect > Tolerances{}.invariance)
      throw Error("state is not invariant (defect " + std::to_string(defect) +
                  "); construct in relaxed mode to allow this");
  }
}

void Process::attach_canonical_or() {
  if (reversed || relaxed) return;  // no canonical OR without an invariant state
  Process rev = canonical_or(*this);
  // the reversal of the reversal is the original law
  rev.reversed = std::make_shared<const Process>(*this);
  reversed = std::make_shared<const Process>(std::move(rev));
}

const Process& Process::or_process() const {
  if (!reversed) throw Error("no outcome reversal attached; call attach_canonical_or first");
  return *reversed;
}

Instrument von_neumann(const Matrix& u, const std::vector<Matrix>& projections,
                       const std::vector<std::string>& labels) {
  const int d = static_cast<int>(u.rows());
  if ((u * u.adjoint() - Matrix::Identity(d, d)).norm() > 1e-10)
    throw Error("von_neumann requires a unitary propagator");
  Matrix psum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const Matrix& p = projections[i];
    if ((p * p - p).norm() > 1e-10 || (p - p.adjoint()).norm() > 1e-10)
      throw Error("projection family member is not an orthogonal projection");
    for (std::size_t j = i + 1; j < projections.size(); ++j)
      if ((p * projections[j]).norm() > 1e-10)
        throw Error("projection family is not orthogonal");
    psum += p;
  }
  if ((psum - Matrix::Identity(d, d)).norm() > 1e-10)
    throw Error("projection family does not sum to the identity");

  std::vector<std::string> names = labels;
  if (names.empty())
    for (std::size_t i = 0; i < projections.size(); ++i) names.push_back("a" + std::to_string(i));
  std::vector<CPMap> maps;
  for (const auto& p : projections)
    maps.push_back(CPMap::from_channel_kraus(d, {u.adjoint() * p}));
  return Instrument(d, names, maps);
}

Instrument ancilla(const Matrix& u, const Matrix& rho_probe,
                   const std::vector<Matrix>& probe_projections,
                   const std::vector<std::string>& labels) {
  const int dp = static_cast<int>(rho_probe.rows());
  const int dtot = static_cast<int>(u.rows());
  if (dtot % dp != 0) throw DimensionMismatch("joint dimension not divisible by probe dimension");
  const int d = dtot / dp;
  if ((u * u.adjoint() - Matrix::Identity(dtot, dtot)).norm() > 1e-10)
    throw Error("ancilla requires a unitary propagator");
  if ((rho_probe - rho_probe.adjoint()).norm() > 1e-10 ||
      std::abs(rho_probe.trace().real() - 1.0) > 1e-10)
    throw Error("probe state is not a density matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> probe_eig(hermitize(rho_probe));
  if (probe_eig.eigenvalues().minCoeff() < -1e-12)
    throw Error("probe state is not positive semidefinite");

  Matrix psum = Matrix::Zero(dp, dp);
  for (const auto& p : probe_projections) {
    if ((p * p - p).norm() > 1e-10) throw Error("probe projection defect");
    psum += p;
  }
  if ((psum - Matrix::Identity(dp, dp)).norm() > 1e-10)
    throw Error("probe projections do not sum to the identity");

  std::vector<std::string> names = labels;
  if (names.empty())
    for (std::size_t i = 0; i < probe_projections.size(); ++i)
      names.push_back("a" + std::to_string(i));

  // Schroedinger Kraus K_{r,m} = sqrt(q_m) (1 (x) <e_r|) U (1 (x) |m>), where
  // rho_p = sum q_m |m><m| and P_a = sum_r |e_r><e_r|.
  std::vector<CPMap> maps;
  for (const auto& p : probe_projections) {
    Eigen::SelfAdjointEigenSolver<Matrix> pe(hermitize(p));
    std::vector<Matrix> kraus;
    for (int m = 0; m < dp; ++m) {
      const double q = probe_eig.eigenvalues()(m);
      if (q < 1e-14) continue;
      // U (1 (x) |m>) as a dtot x d matrix
      Matrix right(dtot, d);
      for (int s = 0; s < d; ++s) {
        Vector e = Vector::Zero(dtot);
        for (int t = 0; t < dp; ++t) e(s * dp + t) = probe_eig.eigenvectors()(t, m);
        right.col(s) = u * e;
      }
      for (int r = 0; r < dp; ++r) {
        if (pe.eigenvalues()(r) < 0.5) continue;  // eigenvectors of P with eigenvalue 1
        Matrix k(d, d);
        for (int s = 0; s < d; ++s)
          for (int row = 0; row < d; ++row) {
            Complex acc = 0;
            for (int t = 0; t < dp; ++t)
              acc += std::conj(pe.eigenvectors()(t, r)) * right(row * dp + t, s);
            k(row, s) = acc;
          }
        kraus.push_back(std::sqrt(q) * k);
      }
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(d, d));
    // Schroedinger kraus K act as Phi^*[rho] = sum K rho K^*, which matches the
    // fixed Heisenberg convention with V = K directly.
    std::vector<Matrix> v = kraus;
    maps.emplace_back(d, std::move(v));
  }
  return Instrument(d, names, maps);
}

namespace {

bool chain_irreducible(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  auto reach = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      for (int j = 0; j < n; ++j) {
        const double w = transpose ? p(j, i) : p(i, j);
        if (w > 0 && !seen[j]) {
          seen[j] = true;
          q.push(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach(false) && reach(true);
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  // replace last equation by normalization
  Eigen::MatrixXd sys(n + 1, n);
  sys.topRows(n) = a;
  sys.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  return sys.colPivHouseholderQr().solve(rhs);
}

}  // namespace

Process classical_markov(const Eigen::MatrixXd& p) {
  const int n = static_cast<int>(p.rows());
  if (p.cols() != n) throw DimensionMismatch("transition matrix must be square");
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) {
      if (p(i, j) < 0) throw Error("transition matrix has a negative entry");
      row += p(i, j);
    }
    if (std::abs(row - 1.0) > 1e-12) throw Error("transition matrix is not row-stochastic");
  }
  if (!chain_irreducible(p)) throw Error("transition matrix is reducible");

  std::vector<std::string> labels;
  std::vector<CPMap> maps;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p(i, j) > 0) {
        labels.push_back(std::to_string(i) + ">" + std::to_string(j));
        Matrix v = Matrix::Zero(n, n);
        v(j, i) = std::sqrt(p(i, j));
        maps.emplace_back(n, std::vector<Matrix>{v});
        edges.emplace_back(i, j);
      }

  std::vector<int> theta(edges.size());
  for (std::size_t a = 0; a < edges.size(); ++a) {
    const auto [i, j] = edges[a];
    auto it = std::find(edges.begin(), edges.end(), std::make_pair(j, i));
    if (it == edges.end())
      throw Error("outcome reversal undefined: transition " + labels[a] +
                  " has no reverse edge");
    theta[a] = static_cast<int>(it - edges.begin());
  }

  const Eigen::VectorXd pi = stationary_distribution(p);
  Matrix rho = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) rho(i, i) = pi(i);
  Process proc(Instrument(n, labels, maps), rho, Involution(theta));
  proc.attach_canonical_or();
  return proc;
}

Process bernoulli(double p) {
  if (p <= 0 || p >= 1) throw Error("bernoulli parameter must be in (0,1)");
  Instrument instr(1, {"a", "b"},
                   {CPMap::scaled_identity(1, p), CPMap::scaled_identity(1, 1 - p)});
  Process proc(instr, Matrix::Identity(1, 1), Involution({1, 0}));
  proc.attach_canonical_or();
  return proc;
}

Process cycle_chain(int n, double q) {
  if (n < 2) throw Error("cycle_chain needs at least 2 states");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    p(i, (i + 1) % n) = q;
    p(i, (i + n - 1) % n) += 1 - q;
  }
  return classical_markov(p);
}

Process product(const Process& p1, const Process& p2) {
  std::vector<std::string> labels;
  std::vector<CPMap> maps;
  std::vector<int> theta;
  const int l2 = p2.num_letters();
  for (int a = 0; a < p1.num_letters(); ++a)
    for (int b = 0; b < l2; ++b) {
      labels.push_back(p1.instrument.alphabet[a] + "," + p2.instrument.alphabet[b]);
      maps.push_back(tensor(p1.map(a), p2.map(b)));
      theta.push_back(p1.theta(a) * l2 + p2.theta(b));
    }
  Process out(Instrument(p1.dim() * p2.dim(), labels, maps), kron(p1.rho, p2.rho),
              Involution(theta));
  out.attach_canonical_or();
  return out;
}

Process sum(const Process& p1, const Process& p2, double mu,
            const std::vector<std::string>& declared_overlap) {
  if (mu <= 0 || mu >= 1) throw Error("sum weight must be in (0,1)");
  const int d1 = p1.dim(), d2 = p2.dim(), d = d1 + d2;

  std::vector<std::string> actual_overlap;
  for (const auto& l : p1.instrument.alphabet)
    if (std::find(p2.instrument.alphabet.begin(), p2.instrument.alphabet.end(), l) !=
        p2.instrument.alphabet.end())
      actual_overlap.push_back(l);
  std::vector<std::string> declared = declared_overlap;
  std::sort(actual_overlap.begin(), actual_overlap.end());
  std::sort(declared.begin(), declared.end());
  if (actual_overlap != declared)
    throw Error("shared labels must be declared explicitly in the sum overlap set");

  auto embed = [&](const Matrix& m, bool second) {
    Matrix out = Matrix::Zero(d, d);
    if (!second)
      out.topLeftCorner(d1, d1) = m;
    else
      out.bottomRightCorner(d2, d2) = m;
    return out;
  };

  std::vector<std::string> labels = p1.instrument.alphabet;
  std::vector<std::vector<Matrix>> kraus;
  for (const auto& m : p1.instrument.maps) {
    std::vector<Matrix> ks;
    for (const auto& v : m.kraus) ks.push_back(embed(v, false));
    kraus.push_back(std::move(ks));
  }
  for (int b = 0; b < p2.num_letters(); ++b) {
    const auto& label = p2.instrument.alphabet[b];
    auto it = std::find(labels.begin(), labels.end(), label);
    std::size_t idx;
    if (it == labels.end()) {
      labels.push_back(label);
      kraus.emplace_back();
      idx = kraus.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - labels.begin());
    }
    for (const auto& v : p2.map(b).kraus) kraus[idx].push_back(embed(v, true));
  }

  // Involutions must agree on the overlap.
  auto index_of = [&](const std::string& l) {
    return static_cast<int>(std::find(labels.begin(), labels.end(), l) - labels.begin());
  };
  auto find_in = [](const std::vector<std::string>& v, const std::string& l) -> int {
    auto it = std::find(v.begin(), v.end(), l);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
  };
  std::vector<int> theta(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int t = -1;
    if (const int a = find_in(p1.instrument.alphabet, labels[i]); a >= 0)
      t = index_of(p1.instrument.alphabet[p1.theta(a)]);
    if (const int b = find_in(p2.instrument.alphabet, labels[i]); b >= 0) {
      const int t2 = index_of(p2.instrument.alphabet[p2.theta(b)]);
      if (t >= 0 && t != t2) throw Error("involutions disagree on the overlap set");
      t = t2;
    }
    theta[i] = t;
  }

  std::vector<CPMap> maps;
  for (auto& ks : kraus) maps.emplace_back(d, std::move(ks));
  Matrix rho = Matrix::Zero(d, d);
  rho.topLeftCorner(d1, d1) = mu * p1.rho;
  rho.bottomRightCorner(d2, d2) = (1 - mu) * p2.rho;
  Process out(Instrument(d, labels, maps), rho, Involution(theta));
  out.attach_canonical_or();
  return out;
}

Process coarse_grain(const Process& p, const Eigen::MatrixXd& m,
                     const std::vector<std::string>& new_alphabet,
                     const Involution& new_theta) {
  const int l1 = p.num_letters();
  const int l2 = static_cast<int>(new_alphabet.size());
  if (m.rows() != l1 || m.cols() != l2)
    throw DimensionMismatch("coarse-graining matrix has wrong shape");
  for (int a = 0; a < l1; ++a) {
    double row = 0;
    for (int b = 0; b < l2; ++b) {
      if (m(a, b) < 0) throw Error("coarse-graining matrix has a negative entry");
      row += m(a, b);
    }
    if (std::abs(row - 1.0) > 1e-12) throw Error("coarse-graining matrix is not stochastic");
  }
  for (int a = 0; a < l1; ++a)
    for (int b = 0; b < l2; ++b)
      if (std::abs(m(p.theta(a), new_theta(b)) - m(a, b)) > 1e-12)
        throw Error("coarse-graining matrix is not compatible with the involutions");

  std::vector<CPMap> maps;
  for (int b = 0; b < l2; ++b) {
    std::vector<Matrix> kraus;
    for (int a = 0; a < l1; ++a) {
      if (m(a, b) == 0) continue;
      const double s = std::sqrt(m(a, b));
      for (const auto& v : p.map(a).kraus) kraus.push_back(s * v);
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(p.dim(), p.dim()));
    maps.emplace_back(p.dim(), std::move(kraus));
  }
  Process out(Instrument(p.dim(), new_alphabet, maps), p.rho, new_theta, p.relaxed);
  out.attach_canonical_or();
  return out;
}

Process composition(const Process& p1, const Process& p2, double commutation_tol) {
  if (p1.dim() != p2.dim()) throw DimensionMismatch("composition requires equal dimensions");
  if ((p1.rho - p2.rho).norm() > 1e-10)
    throw Error("composition requires equal invariant states");
  const Matrix phi2 = superoperator_matrix(p2.instrument.total());
  for (int a = 0; a < p1.num_letters(); ++a) {
    const Matrix ma = superoperator_matrix(p1.map(a));
    if ((ma * phi2 - phi2 * ma).norm() > commutation_tol)
      throw Error("commutation failure: letter " + p1.instrument.alphabet[a] +
                  " does not commute with the second total map");
  }
  std::vector<std::string> labels;
  std::vector<CPMap> maps;
  std::vector<int> theta;
  const int l2 = p2.num_letters();
  for (int a = 0; a < p1.num_letters(); ++a)
    for (int b = 0; b < l2; ++b) {
      labels.push_back(p1.instrument.alphabet[a] + ";" + p2.instrument.alphabet[b]);
      maps.push_back(compose(p1.map(a), p2.map(b)));
      theta.push_back(p1.theta(a) * l2 + p2.theta(b));
    }
  Process out(Instrument(p1.dim(), labels, maps), p1.rho, Involution(theta));
  out.attach_canonical_or();
  return out;
}

Process deform_noise(const Process& p, double eps, const std::vector<CPMap>& xi,
                     NoiseVariant variant) {
  if (eps <= 0 || eps >= 1) throw Error("noise strength must be in (0,1)");
  for (const auto& x : xi) {
    if (x.dim != p.dim()) throw DimensionMismatch("noise map dimension mismatch");
    if (!x.is_unital()) throw Error("noise map must be unital");
    if ((x.apply_schrodinger(p.rho) - p.rho).norm() > Tolerances{}.invariance)
      throw Error("noise map does not preserve the invariant state");
  }

  std::vector<std::string> labels = p.instrument.alphabet;
  std::vector<CPMap> maps;
  std::vector<int> theta = p.theta.perm;
  const int l = p.num_letters();

  if (variant == NoiseVariant::FreshLetter) {
    if (xi.size() != 1) throw Error("fresh-letter deformation takes a single noise map");
    for (int a = 0; a < l; ++a) maps.push_back(p.map(a).scaled(1 - eps));
    labels.push_back("*");
    maps.push_back(xi.front().scaled(eps));
    theta.push_back(l);  // the no-measurement letter is theta-fixed
  } else {
    if (static_cast<int>(xi.size()) != l)
      throw Error("per-letter deformation needs one noise map per letter");
    for (int a = 0; a < l; ++a) {
      std::vector<Matrix> kraus;
      for (const auto& v : p.map(a).scaled(1 - eps).kraus) kraus.push_back(v);
      for (const auto& v : xi[a].scaled(eps / l).kraus) kraus.push_back(v);
      maps.emplace_back(p.dim(), std::move(kraus));
    }
  }
  Process out(Instrument(p.dim(), labels, maps), p.rho, Involution(theta), p.relaxed);
  out.attach_canonical_or();
  return out;
}

}  // namespace rqm
