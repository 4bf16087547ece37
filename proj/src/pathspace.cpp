#include "rqm/pathspace.hpp"

#include <cmath>
#include <random>

namespace rqm {

namespace {

constexpr double kTinyWindow = 1e-250;

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

}  // namespace

std::uint64_t PathTable::index_of(const Word& w) const {
  std::uint64_t idx = 0;
  for (int a : w) {
    if (a < 0 || a >= ell) throw Error("word letter out of range");
    idx = idx * ell + static_cast<std::uint64_t>(a);
  }
  return idx;
}

Word PathTable::word_at(std::uint64_t index) const {
  Word w(T);
  for (int t = T - 1; t >= 0; --t) {
    w[t] = static_cast<int>(index % ell);
    index /= ell;
  }
  return w;
}

double log_prob(const Process& p, const Word& w, Which which) {
  const Process& proc = which == Which::Forward ? p : p.or_process();
  const int ell = proc.num_letters();
  Matrix state = proc.rho;
  double log_acc = 0;
  const Tolerances tol;
  for (int a : w) {
    if (a < 0 || a >= ell) throw Error("unknown outcome label index " + std::to_string(a));
    state = proc.map(a).apply_schrodinger(state);
    const double tr = state.trace().real();
    if (tr <= tol.zero_trace) return kNegInf;
    log_acc += std::log(tr);
    state /= tr;
  }
  return log_acc;
}

PathTable enumerate_table(const Process& p, int T, std::uint64_t cap) {
  const int ell = p.num_letters();
  const std::uint64_t total = checked_pow(ell, T);
  if (total > cap) throw CapExceeded(total, cap);
  const Process& rev = p.or_process();
  const Tolerances tol;

  PathTable table;
  table.T = T;
  table.ell = ell;
  table.log_p.assign(total, kNegInf);
  table.log_p_hat.assign(total, kNegInf);

  struct Node {
    Matrix fwd, bwd;       // trace-normalized running states
    double log_fwd, log_bwd;
    bool fwd_alive, bwd_alive;
  };

  // Depth-first, lexicographic, sharing prefix states.
  std::vector<Node> stack(T + 1);
  stack[0] = {p.rho, rev.rho, 0.0, 0.0, true, true};

  std::uint64_t stride_t[64];  // stride of subtree at depth t: ell^(T-t)
  {
    std::uint64_t s = 1;
    for (int t = T; t >= 0; --t) {
      stride_t[t] = s;
      if (t > 0) s *= ell;
    }
  }

  std::function<void(int, std::uint64_t)> walk = [&](int depth, std::uint64_t base) {
    if (depth == T) {
      const Node& n = stack[T];
      if (n.fwd_alive) table.log_p[base] = n.log_fwd;
      if (n.bwd_alive) table.log_p_hat[base] = n.log_bwd;
      return;
    }
    const Node& cur = stack[depth];
    for (int a = 0; a < ell; ++a) {
      Node& next = stack[depth + 1];
      next.fwd_alive = false;
      next.bwd_alive = false;
      if (cur.fwd_alive) {
        Matrix s = p.map(a).apply_schrodinger(cur.fwd);
        const double tr = s.trace().real();
        if (tr > tol.zero_trace) {
          next.fwd = s / tr;
          next.log_fwd = cur.log_fwd + std::log(tr);
          next.fwd_alive = true;
        } else if (tr > 0) {
          ++table.tiny_trace_events;
        }
      }
      if (cur.bwd_alive) {
        Matrix s = rev.map(a).apply_schrodinger(cur.bwd);
        const double tr = s.trace().real();
        if (tr > tol.zero_trace) {
          next.bwd = s / tr;
          next.log_bwd = cur.log_bwd + std::log(tr);
          next.bwd_alive = true;
        } else if (tr > 0 && tr < kTinyWindow) {
          ++table.tiny_trace_events;
        }
      }
      if (next.fwd_alive || next.bwd_alive)
        walk(depth + 1, base + static_cast<std::uint64_t>(a) * stride_t[depth + 1]);
      // dead subtrees stay at the -inf fill
    }
  };
  walk(0, 0);
  return table;
}

Trajectory sample_trajectory(const Process& p, int T, std::uint64_t rng_seed, bool keep_states) {
  const Process& rev = p.or_process();
  const int ell = p.num_letters();
  const Tolerances tol;
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Trajectory traj;
  traj.word.reserve(T);
  Matrix fwd = p.rho;
  Matrix bwd = rev.rho;
  bool bwd_alive = true;
  for (int t = 0; t < T; ++t) {
    std::vector<double> probs(ell);
    double norm = 0;
    for (int a = 0; a < ell; ++a) {
      probs[a] = std::max(0.0, p.map(a).apply_schrodinger(fwd).trace().real());
      norm += probs[a];
    }
    // norm is 1 up to numerics since the running state is normalized
    double u = unif(rng) * norm;
    int pick = ell - 1;
    for (int a = 0; a < ell; ++a) {
      u -= probs[a];
      if (u <= 0) {
        pick = a;
        break;
      }
    }
    traj.word.push_back(pick);
    fwd = p.map(pick).apply_schrodinger(fwd);
    const double tr = fwd.trace().real();
    traj.log_p += std::log(tr);
    fwd /= tr;
    if (keep_states) traj.conditioned_states.push_back(fwd);

    if (bwd_alive) {
      bwd = rev.map(pick).apply_schrodinger(bwd);
      const double trb = bwd.trace().real();
      if (trb <= tol.zero_trace) {
        bwd_alive = false;
        traj.log_p_hat = kNegInf;
      } else {
        traj.log_p_hat += std::log(trb);
        bwd /= trb;
      }
    }
  }
  return traj;
}

}  // namespace rqm
