#include "sdsbm/theory_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdsbm {

namespace {

double pi_tail(int n, int k, double eps) {
  return 2.0 * k * std::exp(-(0.25 * n * eps * eps) / (1.0 + eps));
}

double ap_tail(int n, double eps) {
  const double shifted = eps - 4.0 / n;
  return 2.0 * double(n) * double(n) *
         std::exp(-(0.25 * n * shifted * shifted) / (1.0 + eps));
}

double cross_tail(int n, double eps) {
  return double(n) * (double(n) - 1.0) * std::exp(-(0.25 * n * eps * eps) / (1.0 + eps));
}

}  // namespace

EpsilonSet default_epsilons(int n, double rho_min, double c_h) {
  if (n < 2) {
    throw invalid_input("default_epsilons: needs n >= 2");
  }
  if (!(rho_min > 0.0) || !(c_h > 0.0)) {
    throw invalid_input("default_epsilons: rho_min and c_h must be positive");
  }
  const double rate = std::sqrt(std::log(double(n)) / double(n));
  EpsilonSet eps;
  eps.c_rho = rho_min / rate;
  eps.c_pi = eps.c_rho / 2.0;
  eps.eps_pi = eps.c_pi * rate;  // = rho_min / 2
  eps.c_m = 3.0;
  eps.c_ap = 6.0;
  eps.eps_m = eps.c_m * rate;
  eps.eps_ap = eps.c_ap * rate;
  eps.c_h = c_h;
  eps.c_1 = 1.0 / c_h + eps.c_m + 2.0 + 16.0 * eps.c_ap;
  eps.c_2 = 1.0;
  return eps;
}

bool epsilons_admissible(const EpsilonSet& eps, double rho_min, double h) {
  return eps.eps_pi <= rho_min - h;
}

double prob_pi(int n, int k, double eps_pi) {
  if (n < 3) {
    throw invalid_input("prob_pi: needs n >= 3");
  }
  if (!(eps_pi > 0.0)) {
    throw invalid_input("prob_pi: eps_pi must be positive");
  }
  return clamp01(1.0 - pi_tail(n, k, eps_pi));
}

double prob_ap(int n, double eps_ap) {
  if (n < 2) {
    throw invalid_input("prob_ap: needs n >= 2");
  }
  if (!(eps_ap > 4.0 / n)) {
    throw invalid_input("prob_ap: bound is vacuous unless eps_ap > 4/n");
  }
  return clamp01(1.0 - ap_tail(n, eps_ap));
}

double prob_cross(int n, double eps_m) {
  if (n < 4) {
    throw invalid_input("prob_cross: needs n >= 4");
  }
  if (!(eps_m > 0.0)) {
    throw invalid_input("prob_cross: eps_m must be positive");
  }
  return clamp01(1.0 - cross_tail(n, eps_m));
}

double gram_floor_margin(int n, double eps_ap) {
  const double shifted = eps_ap - 4.0 / n;
  return (0.25 * n * shifted * shifted) / (1.0 + eps_ap) - 2.0 * std::log(double(n));
}

double cross_floor_margin(int n, double eps_m) {
  return (0.25 * n * eps_m * eps_m) / (1.0 + eps_m) -
         std::log(double(n) * (double(n) - 1.0));
}

Theorem1Bound theorem1_bound(int n, int k, int min_neighborhood, const EpsilonSet& eps,
                             BoundVariant variant) {
  if (min_neighborhood < 1) {
    throw invalid_input("theorem1_bound: min_neighborhood must be >= 1");
  }
  if (n < 4 || k < 1) {
    throw invalid_input("theorem1_bound: needs n >= 4 and K >= 1");
  }
  if (!(eps.eps_ap > 4.0 / n)) {
    throw invalid_input("theorem1_bound: eps_ap must exceed 4/n");
  }
  if (!(eps.eps_pi > 0.0) || !(eps.eps_m > 0.0)) {
    throw invalid_input("theorem1_bound: epsilons must be positive");
  }
  Theorem1Bound out;
  const double inv_nb = 1.0 / double(min_neighborhood);
  if (variant == BoundVariant::main) {
    out.error_bound = inv_nb + eps.eps_m + 2.0 / n + 8.0 * eps.eps_ap;
  } else {
    out.error_bound = 2.0 * inv_nb + eps.eps_m + 2.0 / n + 16.0 * eps.eps_ap;
  }
  // additive union bound over the three tails
  out.probability_floor =
      clamp01(1.0 - pi_tail(n, k, eps.eps_pi) - ap_tail(n, eps.eps_ap) -
              cross_tail(n, eps.eps_m));
  return out;
}

CorollaryBounds corollary_bounds(int n, double c_1) {
  if (n < 2) {
    throw invalid_input("corollary_bounds: needs n >= 2");
  }
  if (!(c_1 > 0.0)) {
    throw invalid_input("corollary_bounds: C_1 must be positive");
  }
  CorollaryBounds out;
  out.two_inf = std::sqrt(c_1) * std::pow(double(n) * std::log(double(n)), 0.25);
  out.frobenius = out.two_inf * std::sqrt(double(n));
  return out;
}

SeparationQuantities separation(double gamma, double rho_min, double d_b_star, int n) {
  if (!(gamma >= 0.0) || !(rho_min > 0.0) || !(d_b_star >= 0.0) || n < 1) {
    throw invalid_input("separation: inputs must be nonnegative with rho_min > 0, n >= 1");
  }
  SeparationQuantities s;
  const double half_rho = rho_min / 2.0;
  s.d_b_star = d_b_star;
  s.s_n = gamma * std::sqrt(half_rho) * d_b_star;
  s.l_n = 2.0 * std::exp(-(0.5 * half_rho * half_rho * n) / (1.0 + half_rho / 3.0));
  s.e_min = double(n) * half_rho;
  s.d_p_star_lower = gamma * std::sqrt(s.e_min) * d_b_star;
  s.radius = s.s_n * std::sqrt(double(n)) / 2.0;
  return s;
}

AssumptionsReport check_assumptions(int n, int k, const std::vector<double>& rho,
                                    double gamma, double d_b_star, const EpsilonSet& eps) {
  if (n < 2 || k < 1 || rho.empty()) {
    throw invalid_input("check_assumptions: invalid model parameters");
  }
  double rho_min = rho[0];
  for (double r : rho) {
    rho_min = std::min(rho_min, r);
  }
  const double rate = std::sqrt(std::log(double(n)) / double(n));
  AssumptionsReport rep;

  rep.rho_floor_slack = rho_min - eps.c_rho * rate;
  rep.eps_window_slack =
      std::min(rho_min - eps.eps_pi, eps.eps_pi - eps.c_pi * rate);
  rep.concentration_margin =
      (0.25 * n * eps.eps_pi * eps.eps_pi) / (1.0 + eps.eps_pi) - std::log(2.0 * k);
  rep.k_decay = double(k) * std::pow(double(n), -eps.c_pi * eps.c_pi / 4.0);
  // rho_min > eps_pi strictly; eps_pi >= C_pi*rate may hold with equality
  rep.proportions.pass = rep.rho_floor_slack >= 0.0 && rho_min > eps.eps_pi &&
                         eps.eps_pi - eps.c_pi * rate >= 0.0 && eps.c_pi > 0.0 &&
                         eps.c_pi < eps.c_rho && rep.concentration_margin > 0.0 &&
                         rep.k_decay < 1.0;
  rep.proportions.slack = std::min(
      {rep.rho_floor_slack, rep.eps_window_slack, rep.concentration_margin,
       1.0 - rep.k_decay});

  if (k >= 2) {
    rep.size_concentration.slack =
        (double(n) * rho_min * rho_min) / (8.0 * (1.0 + rho_min / 6.0)) -
        std::log(double(k) * double(k) * (double(k) - 1.0));
  } else {
    // a single community has no pairs to separate
    rep.size_concentration.slack = std::numeric_limits<double>::infinity();
  }
  rep.size_concentration.pass = rep.size_concentration.slack > 0.0;

  rep.separation_vs_error.slack =
      gamma * d_b_star * rho_min -
      8.0 * eps.c_1 * eps.c_1 * std::pow(std::log(double(n)) / double(n), 0.25);
  rep.separation_vs_error.pass = rep.separation_vs_error.slack >= 0.0;
  return rep;
}

}  // namespace sdsbm
