#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace precis {

/// splitmix64 finaliser; the mixing step behind every derived stream.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic child seed for (master, path...). Order of the path matters.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Seedable generator. Child streams come from split(), never from shared state,
/// so parallel replicates draw identical numbers regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, {index})); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace precis
