#include "precis/metrics.hpp"

#include <stdexcept>

namespace precis {

RecoveryScore score(const SupportSet& truth, const SupportSet& estimate) {
  if (truth.dim() != estimate.dim()) throw DimensionMismatch("supports differ in dimension");
  RecoveryScore s;
  s.true_edges = truth.size();
  s.estimated_edges = estimate.size();
  for (const auto& [i, j] : estimate.pairs())
    if (truth.contains(i, j)) ++s.true_positives;
  s.hamming = (s.estimated_edges - s.true_positives) + (s.true_edges - s.true_positives);
  if (s.estimated_edges == 0) {
    s.precision = 0.0;
    s.precision_defined = false;
  } else {
    s.precision = static_cast<double>(s.true_positives) / static_cast<double>(s.estimated_edges);
  }
  return s;
}

RandomGuess random_guess_expectation(std::size_t p, std::size_t true_edges,
                                     std::size_t guessed_edges) {
  const std::size_t total = SupportSet::max_pairs(p);
  if (true_edges > total || guessed_edges > total)
    throw std::invalid_argument("edge count exceeds the number of pairs");
  RandomGuess g;
  if (total == 0) return g;
  const double tp = static_cast<double>(guessed_edges) * static_cast<double>(true_edges) /
                    static_cast<double>(total);
  g.expected_hamming = static_cast<double>(true_edges + guessed_edges) - 2.0 * tp;
  g.expected_precision =
      guessed_edges == 0 ? 0.0 : static_cast<double>(true_edges) / static_cast<double>(total);
  return g;
}

}  // namespace precis
