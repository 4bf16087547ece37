#pragma once

#include <cstdint>
#include <functional>

#include "rqm/instrument.hpp"

namespace rqm {

/// Outcome word as letter indices into the process alphabet. The empty word
/// has probability 1.
using Word = std::vector<int>;

enum class Which { Forward, Reversed };

/// Exact table of log P_T and log Phat_T over all l^T words in lexicographic
/// order (word index = base-l digit value). Built in log-domain; structural
/// zeros are stored as -inf.
struct PathTable {
  int T = 0;
  int ell = 0;
  std::vector<double> log_p;
  std::vector<double> log_p_hat;
  /// Running traces in (zero_trace, 1e-250) were declared zero; their count is
  /// reported so tiny-positive-vs-zero calls are visible rather than silent.
  std::uint64_t tiny_trace_events = 0;

  std::uint64_t size() const { return log_p.size(); }
  std::uint64_t index_of(const Word& w) const;
  Word word_at(std::uint64_t index) const;
};

/// log P_T(w) (or log Phat_T(w) through the attached OR process); -inf on
/// structural zeros.
double log_prob(const Process& p, const Word& w, Which which = Which::Forward);

/// Exhaustive table via prefix-sharing depth-first propagation. Throws
/// CapExceeded when l^T > cap.
PathTable enumerate_table(const Process& p, int T, std::uint64_t cap = (1ull << 21));

struct Trajectory {
  Word word;
  double log_p = 0;
  double log_p_hat = 0;
  std::vector<Matrix> conditioned_states;  // filled when requested
};

Trajectory sample_trajectory(const Process& p, int T, std::uint64_t rng_seed,
                             bool keep_states = false);

/// Applies Theta_T: reverses the word and letter-maps through theta.
Word reverse_word(const Word& w, const Involution& theta);

}  // namespace rqm
