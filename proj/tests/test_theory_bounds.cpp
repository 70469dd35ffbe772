#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "sdsbm/estimator.hpp"
#include "sdsbm/graph_model.hpp"
#include "sdsbm/theory_bounds.hpp"
#include "support/oracles.hpp"

using namespace sdsbm;

TEST_CASE("prob_pi clamps and follows the formula") {
  // n=3, K=1, eps=1: 1 - 2 exp(-0.375) < 0, clamped
  CHECK(prob_pi(3, 1, 1.0) == 0.0);
  const double raw = 1.0 - 2.0 * std::exp(-0.375);
  CHECK(raw < 0.0);
  // large eps drives the floor to 1
  CHECK(prob_pi(100, 3, 50.0) == doctest::Approx(1.0));
  // doubling K never increases the floor
  for (int k = 1; k <= 8; k *= 2) {
    CHECK(prob_pi(500, 2 * k, 0.3) <= prob_pi(500, k, 0.3));
  }
  CHECK_THROWS_AS(prob_pi(2, 1, 0.5), invalid_input);
  CHECK_THROWS_AS(prob_pi(10, 1, 0.0), invalid_input);
}

TEST_CASE("prob_ap arithmetic at n=100, eps=0.5") {
  const double expected = 1.0 - 2e4 * std::exp(-(25.0 * 0.46 * 0.46) / 1.5);
  CHECK(prob_ap(100, 0.5) == doctest::Approx(std::max(0.0, expected)));
  // exponent matches the hand-computed 3.5267
  CHECK((25.0 * 0.46 * 0.46) / 1.5 == doctest::Approx(3.5267).epsilon(1e-4));
  CHECK_THROWS_AS(prob_ap(100, 0.04), invalid_input);
  CHECK_THROWS_AS(prob_ap(100, 0.01), invalid_input);
}

TEST_CASE("prob_ap floor rises along n with the default eps rule") {
  double prev = -1.0;
  for (int n : {100, 1000, 10000, 100000, 1000000}) {
    const double eps = 6.0 * std::sqrt(std::log(double(n)) / double(n));
    const double floor = prob_ap(n, eps);
    CHECK(floor >= prev);
    prev = floor;
  }
  CHECK(prev == doctest::Approx(1.0));
  // condition (a) margin grows as well
  CHECK(gram_floor_margin(1000000, 6.0 * std::sqrt(std::log(1e6) / 1e6)) >
        gram_floor_margin(10000, 6.0 * std::sqrt(std::log(1e4) / 1e4)));
}

TEST_CASE("prob floors are monotone in their epsilon") {
  for (double lo = 0.2, hi = 0.3; hi < 1.0; lo += 0.1, hi += 0.1) {
    CHECK(prob_pi(200, 4, lo) <= prob_pi(200, 4, hi));
    CHECK(prob_ap(200, lo) <= prob_ap(200, hi));
    CHECK(prob_cross(200, lo) <= prob_cross(200, hi));
  }
}

TEST_CASE("prob_cross arithmetic and preconditions") {
  const double expected = 1.0 - 100.0 * 99.0 * std::exp(-(0.25 * 100 * 0.25) / 1.5);
  CHECK(prob_cross(100, 0.5) == doctest::Approx(std::max(0.0, expected)));
  CHECK(prob_cross(100, 100.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(prob_cross(3, 0.5), invalid_input);
  CHECK_THROWS_AS(prob_cross(10, 0.0), invalid_input);
}

TEST_CASE("theorem 1 bound arithmetic") {
  EpsilonSet eps;
  eps.eps_pi = 0.1;
  eps.eps_m = 0.05;
  eps.eps_ap = 0.05;
  Theorem1Bound main = theorem1_bound(400, 5, 60, eps, BoundVariant::main);
  CHECK(main.error_bound == doctest::Approx(1.0 / 60 + 0.05 + 0.005 + 0.4));
  CHECK(main.error_bound == doctest::Approx(0.471667).epsilon(1e-5));
  Theorem1Bound app = theorem1_bound(400, 5, 60, eps, BoundVariant::appendix);
  CHECK(app.error_bound ==
        doctest::Approx(main.error_bound + 1.0 / 60 + 8.0 * eps.eps_ap));
  CHECK(main.error_bound <= app.error_bound);
  CHECK(main.probability_floor == app.probability_floor);
  CHECK(main.probability_floor >= 0.0);
  CHECK(main.probability_floor <= 1.0);
}

TEST_CASE("theorem 1 bound approaches 2/n in the small-eps large-neighborhood limit") {
  EpsilonSet eps;
  eps.eps_pi = 1e-9;
  eps.eps_m = 1e-12;
  eps.eps_ap = 1.0;  // must stay > 4/n
  Theorem1Bound b = theorem1_bound(1000, 5, 1000000000, eps, BoundVariant::main);
  CHECK(b.error_bound == doctest::Approx(2.0 / 1000 + 8.0).epsilon(1e-6));
  // only the 8*eps_ap term separates the bound from its 2/n limit
  for (double eps_ap : {0.5, 0.1, 0.02, 0.005}) {
    eps.eps_ap = eps_ap;
    Theorem1Bound t = theorem1_bound(1000, 5, 1000000000, eps, BoundVariant::main);
    CHECK(t.error_bound - 8.0 * eps_ap == doctest::Approx(2.0 / 1000).epsilon(1e-6));
  }
}

TEST_CASE("theorem1 floor composes the three tails") {
  const int n = 4000, k = 4;
  EpsilonSet eps;
  eps.eps_pi = 0.12;
  eps.eps_m = 0.2;
  eps.eps_ap = 0.2;
  Theorem1Bound b = theorem1_bound(n, k, 50, eps, BoundVariant::main);
  const double tail_pi = 2.0 * k * std::exp(-(0.25 * n * 0.12 * 0.12) / 1.12);
  const double tail_ap =
      2.0 * n * double(n) * std::exp(-(0.25 * n * (0.2 - 4.0 / n) * (0.2 - 4.0 / n)) / 1.2);
  const double tail_m = double(n) * (n - 1.0) * std::exp(-(0.25 * n * 0.04) / 1.2);
  CHECK(b.probability_floor ==
        doctest::Approx(clamp01(1.0 - tail_pi - tail_ap - tail_m)).epsilon(1e-12));
}

TEST_CASE("corollary bounds") {
  CorollaryBounds b = corollary_bounds(100, 1.0);
  CHECK(b.two_inf == doctest::Approx(std::pow(100.0 * std::log(100.0), 0.25)));
  CHECK(b.two_inf == doctest::Approx(4.632457).epsilon(1e-6));
  CHECK(b.frobenius == b.two_inf * 10.0);  // sqrt(n) exactly
  CorollaryBounds b2 = corollary_bounds(1000, 1.0);
  CHECK(b2.two_inf > b.two_inf);
  CHECK_THROWS_AS(corollary_bounds(1, 1.0), invalid_input);
  CHECK_THROWS_AS(corollary_bounds(100, 0.0), invalid_input);
}

TEST_CASE("separation quantities on the diagonal-dominant benchmark") {
  SeparationQuantities s = separation(1.0, 0.2, 0.424264, 600);
  CHECK(s.s_n == doctest::Approx(0.134164).epsilon(1e-5));
  CHECK(s.radius == doctest::Approx(1.6432).epsilon(1e-4));
  CHECK(s.e_min == doctest::Approx(60.0));
  // algebraic identities
  CHECK(s.radius * 2.0 / std::sqrt(600.0) == doctest::Approx(s.s_n).epsilon(1e-12));
  CHECK(s.d_p_star_lower == doctest::Approx(s.s_n * std::sqrt(600.0)).epsilon(1e-12));
  SeparationQuantities zero = separation(0.0, 0.2, 0.424264, 600);
  CHECK(zero.s_n == 0.0);
  CHECK(zero.d_p_star_lower == 0.0);
}

TEST_CASE("default epsilons follow the corollary recipe") {
  EpsilonSet eps = default_epsilons(400, 0.2);
  const double rate = std::sqrt(std::log(400.0) / 400.0);
  CHECK(eps.eps_pi == doctest::Approx(0.1));
  CHECK(eps.eps_m == doctest::Approx(3.0 * rate));
  CHECK(eps.eps_ap == doctest::Approx(6.0 * rate));
  CHECK(eps.c_1 == doctest::Approx(1.0 + 3.0 + 2.0 + 96.0));
  CHECK(eps.c_pi < eps.c_rho);
  // theorem-1 context window: eps_pi <= rho_min - h
  CHECK(epsilons_admissible(eps, 0.2, 0.05));
  CHECK_FALSE(epsilons_admissible(eps, 0.2, 0.15));
}

TEST_CASE("assumption checks pass in the classical fixed-K dense regime") {
  // pure arithmetic at a large n: fixed K, fixed rho, gamma = 1
  const int n = 1000000;
  EpsilonSet eps = default_epsilons(n, 0.2);
  eps.c_1 = 0.1;
  AssumptionsReport rep =
      check_assumptions(n, 5, {0.2, 0.2, 0.2, 0.2, 0.2}, 1.0, 0.424264, eps);
  CHECK(rep.proportions.pass);
  CHECK(rep.size_concentration.pass);
  CHECK(rep.separation_vs_error.pass);
}

TEST_CASE("assumption 3 slack arithmetic and gamma=0 failure") {
  EpsilonSet eps = default_epsilons(600, 0.2);
  eps.c_1 = 0.1;
  AssumptionsReport rep =
      check_assumptions(600, 5, {0.2, 0.2, 0.2, 0.2, 0.2}, 1.0, 0.4243, eps);
  const double expected =
      1.0 * 0.4243 * 0.2 - 8.0 * 0.01 * std::pow(std::log(600.0) / 600.0, 0.25);
  CHECK(rep.separation_vs_error.slack == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.separation_vs_error.pass);

  AssumptionsReport zero_gamma =
      check_assumptions(600, 5, {0.2, 0.2, 0.2, 0.2, 0.2}, 0.0, 0.4243, eps);
  CHECK_FALSE(zero_gamma.separation_vs_error.pass);
  CHECK(zero_gamma.separation_vs_error.slack < 0.0);
}

TEST_CASE("empirical lemma events beat their floors at n=200 (reduced replicas)") {
  // protocol of the full acceptance check, trimmed to 50 replicates
  const int n = 200, k = 5, reps = 50;
  BlockMatrix block(5,
                    {0.9, 0.6, 0.6, 0.6, 0.6, 0.6, 0.9, 0.6, 0.6, 0.6, 0.6, 0.6, 0.9,
                     0.6, 0.6, 0.6, 0.6, 0.6, 0.9, 0.6, 0.6, 0.6, 0.6, 0.6, 0.9},
                    1.0);
  CommunityProbs rho = CommunityProbs::uniform(k);
  EpsilonSet eps = default_epsilons(n, rho.rho_min());

  int pi_hits = 0, ap_hits = 0;
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream label_rng(seed_mix({std::uint64_t(rep), 0x71}));
    LabelVector labels = sample_labels(rho, n, label_rng);
    ProbabilityMatrix p = build_probability_matrix(labels, block);
    RandomStream edge_rng(seed_mix({std::uint64_t(rep), 0x72}));
    AdjacencyMatrix a = sample_directed(p, edge_rng);

    // Lemma-1 event: same-community fractions near rho
    double worst_pi = 0.0;
    std::vector<int> sizes(std::size_t(k), 0);
    for (int z : labels) {
      ++sizes[std::size_t(z)];
    }
    for (int i = 0; i < n; ++i) {
      const double frac = double(sizes[std::size_t(labels[std::size_t(i)])] - 1) / (n - 1);
      worst_pi = std::max(worst_pi, std::abs(frac - rho.at(labels[std::size_t(i)])));
    }
    pi_hits += worst_pi < eps.eps_pi ? 1 : 0;

    // Lemma-3 event: Gram concentration around P P^T / n
    GramMatrix g = gram(a);
    Matrix expected = oracle::expected_gram(p.values);
    double worst_ap = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        worst_ap = std::max(worst_ap,
                            std::abs(g.value(i, j) - expected(std::size_t(i), std::size_t(j))));
      }
    }
    ap_hits += worst_ap < eps.eps_ap ? 1 : 0;
  }
  const double pi_floor = prob_pi(n, k, eps.eps_pi);
  const double ap_floor = prob_ap(n, eps.eps_ap);
  CHECK(double(pi_hits) / reps >= pi_floor);
  CHECK(double(ap_hits) / reps >= ap_floor);
  // at this n the Gram floor is informative; the event must be near-certain
  CHECK(ap_floor > 0.5);
  CHECK(ap_hits == reps);
}

TEST_CASE("check_assumptions validates inputs") {
  EpsilonSet eps = default_epsilons(100, 0.5);
  CHECK_THROWS_AS(check_assumptions(1, 2, {0.5, 0.5}, 1.0, 0.1, eps), invalid_input);
  CHECK_THROWS_AS(check_assumptions(100, 2, {}, 1.0, 0.1, eps), invalid_input);
}
