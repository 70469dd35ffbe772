#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "sdsbm/metrics.hpp"
#include "sdsbm/rng.hpp"
#include "support/oracles.hpp"

using namespace sdsbm;

namespace {

LabelVector random_labels(int n, int k, RandomStream& rng) {
  LabelVector v(std::size_t(n), 0);
  for (int& z : v) {
    z = int(rng.uniform_below(std::uint64_t(k)));
  }
  return v;
}

LabelVector apply_permutation(const LabelVector& labels, const std::vector<int>& perm) {
  LabelVector out = labels;
  for (int& z : out) {
    z = perm[std::size_t(z)];
  }
  return out;
}

}  // namespace

TEST_CASE("ari basics") {
  LabelVector a = {0, 0, 1, 1};
  CHECK(ari(a, a) == 1.0);
  CHECK(ari(a, LabelVector{0, 1, 0, 1}) == doctest::Approx(-0.5));
  CHECK(ari(a, LabelVector{1, 1, 0, 0}) == 1.0);
  CHECK_THROWS_AS(ari(a, LabelVector{0, 1}), invalid_input);
}

TEST_CASE("ari degenerate single-cluster case is 1") {
  LabelVector ones = {0, 0, 0, 0};
  CHECK(ari(ones, ones) == 1.0);
}

TEST_CASE("ari equals pair-counting oracle on random pairs") {
  RandomStream rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + int(rng.uniform_below(29));
    const int k = 1 + int(rng.uniform_below(5));
    LabelVector t = random_labels(n, k, rng);
    LabelVector p = random_labels(n, k, rng);
    CHECK(ari(t, p) == oracle::pair_counting_ari(t, p));
  }
}

TEST_CASE("permutation accuracy basics") {
  LabelVector t = {0, 0, 1, 1};
  CHECK(permutation_accuracy(t, LabelVector{1, 1, 0, 0}, 2) == 1.0);
  CHECK(permutation_accuracy(t, LabelVector{0, 1, 0, 1}, 2) == 0.5);
  CHECK_THROWS_AS(permutation_accuracy(t, LabelVector{0, 0, 1, 2}, 2), invalid_input);
}

TEST_CASE("assignment matches exhaustive permutation search up to K=7") {
  RandomStream rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + int(rng.uniform_below(6));
    const int n = k + int(rng.uniform_below(40));
    LabelVector t = random_labels(n, k, rng);
    LabelVector p = random_labels(n, k, rng);
    CHECK(best_match_count(t, p, k) == oracle::exhaustive_best_match(t, p, k));
  }
}

TEST_CASE("metrics are invariant under relabeling the prediction") {
  RandomStream rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + int(rng.uniform_below(5));
    const int n = k + int(rng.uniform_below(30));
    LabelVector t = random_labels(n, k, rng);
    LabelVector p = random_labels(n, k, rng);
    std::vector<int> perm(std::size_t(k), 0);
    for (int i = 0; i < k; ++i) {
      perm[std::size_t(i)] = i;
    }
    for (int i = k - 1; i > 0; --i) {
      std::swap(perm[std::size_t(i)], perm[std::size_t(rng.uniform_below(std::uint64_t(i) + 1))]);
    }
    LabelVector shuffled = apply_permutation(p, perm);
    CHECK(ari(t, p) == doctest::Approx(ari(t, shuffled)).epsilon(1e-15));
    CHECK(permutation_accuracy(t, p, k) == permutation_accuracy(t, shuffled, k));
  }
}

TEST_CASE("balanced predictions score at least 1/K") {
  RandomStream rng(104);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + int(rng.uniform_below(4));
    const int per = 5 + int(rng.uniform_below(10));
    const int n = k * per;
    LabelVector t = random_labels(n, k, rng);
    LabelVector p(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) {
      p[std::size_t(i)] = i / per;  // equal-sized predicted clusters
    }
    CHECK(permutation_accuracy(t, p, k) >= 1.0 / k);
  }
}

TEST_CASE("exact recovery") {
  LabelVector t = {0, 1, 2, 0, 1, 2};
  CHECK(exact_recovery(t, t, 3));
  CHECK(exact_recovery(t, LabelVector{2, 0, 1, 2, 0, 1}, 3));
  LabelVector hundred(100, 0);
  LabelVector flipped = hundred;
  for (std::size_t i = 0; i < 50; ++i) {
    hundred[i] = 1;
    flipped[i] = 1;
  }
  flipped[99] = 1;
  CHECK_FALSE(exact_recovery(hundred, flipped, 2));
  CHECK(permutation_accuracy(hundred, flipped, 2) == doctest::Approx(0.99));
}

TEST_CASE("exact recovery implies ARI 1") {
  RandomStream rng(105);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + int(rng.uniform_below(4));
    const int n = k * 4 + int(rng.uniform_below(20));
    LabelVector t = random_labels(n, k, rng);
    std::vector<int> perm(std::size_t(k), 0);
    for (int i = 0; i < k; ++i) {
      perm[std::size_t(i)] = (i + 1) % k;
    }
    LabelVector p = apply_permutation(t, perm);
    REQUIRE(exact_recovery(t, p, k));
    CHECK(ari(t, p) == 1.0);
  }
}

TEST_CASE("contingency table marginals are consistent") {
  LabelVector t = {0, 0, 1, 2, 2, 2};
  LabelVector p = {1, 1, 0, 0, 2, 2};
  ContingencyTable tab = ContingencyTable::build(t, p);
  CHECK(tab.total == 6);
  std::int64_t sum = 0;
  for (std::int64_t c : tab.counts) {
    sum += c;
  }
  CHECK(sum == tab.total);
  for (int r = 0; r < tab.k_true; ++r) {
    std::int64_t row = 0;
    for (int c = 0; c < tab.k_pred; ++c) {
      row += tab.count(r, c);
    }
    CHECK(row == tab.row_marginals[std::size_t(r)]);
  }
}
