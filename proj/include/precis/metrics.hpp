#pragma once

#include <cstddef>

#include "precis/matops.hpp"

namespace precis {

/// Structure-recovery counts over unordered off-diagonal pairs.
struct RecoveryScore {
  std::size_t hamming = 0;  // false positives + false negatives
  double precision = 0.0;   // true_positives / estimated_edges; 0 when nothing was estimated
  bool precision_defined = true;
  std::size_t true_edges = 0;
  std::size_t estimated_edges = 0;
  std::size_t true_positives = 0;
};

/// Throws DimensionMismatch when the supports have different dimensions.
RecoveryScore score(const SupportSet& truth, const SupportSet& estimate);

struct RandomGuess {
  double expected_hamming = 0.0;
  double expected_precision = 0.0;
};

/// Expectation under a uniformly random choice of `guessed_edges` pairs out of
/// p(p-1)/2 (hypergeometric true-positive count).
RandomGuess random_guess_expectation(std::size_t p, std::size_t true_edges,
                                     std::size_t guessed_edges);

}  // namespace precis
