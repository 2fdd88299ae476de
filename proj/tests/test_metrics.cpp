#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "precis/metrics.hpp"
#include "precis/rng.hpp"

using namespace precis;

namespace {

SupportSet random_support(std::size_t p, std::size_t edges, Rng& rng) {
  std::vector<std::size_t> idx(SupportSet::max_pairs(p));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SupportSet s(p);
  for (std::size_t k = 0; k < edges; ++k) {
    const std::size_t pick = k + rng.below(idx.size() - k);
    std::swap(idx[k], idx[pick]);
  }
  std::size_t flat = 0;
  std::vector<char> chosen(idx.size(), 0);
  for (std::size_t k = 0; k < edges; ++k) chosen[idx[k]] = 1;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j, ++flat)
      if (chosen[flat]) s.insert(i, j);
  return s;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("identical supports") {
    SupportSet a(5);
    a.insert(0, 1);
    a.insert(3, 4);
    const RecoveryScore r = score(a, a);
    CHECK(r.hamming == 0);
    CHECK(r.precision == 1.0);
    CHECK(r.true_positives == 2);
  }

  TEST_CASE("one hit one miss") {
    SupportSet t(4), e(4);
    t.insert(1, 2);
    t.insert(1, 3);
    e.insert(1, 2);
    e.insert(2, 3);
    const RecoveryScore r = score(t, e);
    CHECK(r.hamming == 2);
    CHECK(r.precision == 0.5);
    CHECK(r.hamming == static_cast<std::size_t>(2 * (1 - r.precision) * r.true_edges));
  }

  TEST_CASE("empty estimate flags precision") {
    SupportSet t(4), e(4);
    t.insert(0, 1);
    t.insert(2, 3);
    t.insert(0, 3);
    const RecoveryScore r = score(t, e);
    CHECK(r.hamming == 3);
    CHECK(r.precision == 0.0);
    CHECK_FALSE(r.precision_defined);
    CHECK_THROWS_AS(score(SupportSet(3), SupportSet(4)), DimensionMismatch);
  }

  TEST_CASE("symmetry, bounds and the matched-count identity") {
    Rng rng(5);
    for (int t = 0; t < 500; ++t) {
      const std::size_t p = 2 + rng.below(10);
      const std::size_t total = SupportSet::max_pairs(p);
      const SupportSet a = random_support(p, rng.below(total + 1), rng);
      const SupportSet b = random_support(p, rng.below(total + 1), rng);
      const RecoveryScore ab = score(a, b);
      CHECK(ab.hamming == score(b, a).hamming);
      CHECK(ab.hamming <= total);
      CHECK(ab.precision >= 0.0);
      CHECK(ab.precision <= 1.0);
      const SupportSet c = random_support(p, a.size(), rng);
      const RecoveryScore ac = score(a, c);
      CHECK(ac.hamming == 2 * (ac.true_edges - ac.true_positives));
    }
  }

  TEST_CASE("random guess expectation examples") {
    const RandomGuess g = random_guess_expectation(12, 21, 21);
    CHECK(g.expected_precision == doctest::Approx(21.0 / 66.0));
    CHECK(g.expected_precision == doctest::Approx(0.318).epsilon(1e-3));
    CHECK(g.expected_hamming == doctest::Approx(42.0 - 2.0 * 21.0 * 21.0 / 66.0));
    const RandomGuess all = random_guess_expectation(6, 4, 15);
    CHECK(all.expected_precision == doctest::Approx(4.0 / 15.0));
    CHECK(all.expected_hamming == doctest::Approx(11.0));
    CHECK_THROWS_AS(random_guess_expectation(3, 4, 1), std::invalid_argument);
  }

  TEST_CASE("random guess expectation against simulation") {
    const std::size_t p = 12, truth_edges = 21, guessed = 15;
    Rng rng(99);
    const SupportSet truth = random_support(p, truth_edges, rng);
    const int draws = 100000;
    double sh = 0, sh2 = 0, sp = 0, sp2 = 0;
    for (int t = 0; t < draws; ++t) {
      const RecoveryScore r = score(truth, random_support(p, guessed, rng));
      const double h = static_cast<double>(r.hamming);
      sh += h;
      sh2 += h * h;
      sp += r.precision;
      sp2 += r.precision * r.precision;
    }
    const double mh = sh / draws, mp = sp / draws;
    const double se_h = std::sqrt((sh2 / draws - mh * mh) / draws);
    const double se_p = std::sqrt((sp2 / draws - mp * mp) / draws);
    const RandomGuess g = random_guess_expectation(p, truth_edges, guessed);
    CHECK(std::abs(mh - g.expected_hamming) < 3 * se_h);
    CHECK(std::abs(mp - g.expected_precision) < 3 * se_p);
  }
}
