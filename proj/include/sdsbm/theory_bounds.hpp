#pragma once

#include <vector>

#include "sdsbm/core.hpp"

namespace sdsbm {

// The epsilon triple driving the concentration floors, together with the
// constants that generate them. Defaults follow the C_m > sqrt(8),
// C_AP > sqrt(32) recipe with C_m = 3, C_AP = 6, and the derived
// C_1 = 1/C_h + C_m + 2 + 16*C_AP.
struct EpsilonSet {
  double eps_pi = 0.0;
  double eps_ap = 0.0;
  double eps_m = 0.0;
  double c_pi = 0.0;
  double c_rho = 0.0;
  double c_ap = 6.0;
  double c_m = 3.0;
  double c_h = 1.0;
  double c_1 = 0.0;
  double c_2 = 1.0;
};

/// Epsilons at sample size n for a model with the given rho_min:
/// eps_pi = rho_min/2 (so C_pi = C_rho/2), eps_m = 3*sqrt(log n / n),
/// eps_ap = 6*sqrt(log n / n).
EpsilonSet default_epsilons(int n, double rho_min, double c_h = 1.0);

/// Theorem-1 context precondition: eps_pi <= rho_min - h.
bool epsilons_admissible(const EpsilonSet& eps, double rho_min, double h);

/// Floor for the same-community proportion event, clamped to [0,1].
double prob_pi(int n, int k, double eps_pi);

/// Floor for the Gram concentration event; eps_ap must exceed 4/n.
double prob_ap(int n, double eps_ap);

/// Floor for the pairwise centered cross-term event.
double prob_cross(int n, double eps_m);

/// Margins whose divergence makes the respective floors tend to one.
double gram_floor_margin(int n, double eps_ap);
double cross_floor_margin(int n, double eps_m);

enum class BoundVariant {
  main,      // 1/|N_i| + eps_m + 2/n + 8 eps_ap
  appendix,  // 2/|N_i| + eps_m + 2/n + 16 eps_ap (derivation-backed, looser)
};

struct Theorem1Bound {
  double error_bound = 0.0;
  double probability_floor = 0.0;
};

/// Row-wise mean-squared-error bound and its joint probability floor
/// (union bound over the three concentration events; K enters through
/// the community-proportion tail).
Theorem1Bound theorem1_bound(int n, int k, int min_neighborhood, const EpsilonSet& eps,
                             BoundVariant variant);

struct CorollaryBounds {
  double two_inf = 0.0;    // sqrt(C1) * (n log n)^{1/4}
  double frobenius = 0.0;  // two_inf * sqrt(n)
};

CorollaryBounds corollary_bounds(int n, double c_1);

struct SeparationQuantities {
  double d_b_star = 0.0;
  double d_p_star_lower = 0.0;  // gamma * sqrt(E_min) * d_B*
  double s_n = 0.0;             // gamma * sqrt(rho_min/2) * d_B*
  double l_n = 0.0;
  double e_min = 0.0;           // n * rho_min / 2
  double radius = 0.0;          // S_n * sqrt(n) / 2
};

SeparationQuantities separation(double gamma, double rho_min, double d_b_star, int n);

struct AssumptionCheck {
  bool pass = false;
  double slack = 0.0;  // LHS - RHS of the binding inequality
};

struct AssumptionsReport {
  AssumptionCheck proportions;     // rho_min floor + eps_pi window + concentration margin
  AssumptionCheck size_concentration;
  AssumptionCheck separation_vs_error;
  // components behind `proportions`
  double rho_floor_slack = 0.0;        // rho_min - C_rho sqrt(log n / n)
  double eps_window_slack = 0.0;       // min(rho_min - eps_pi, eps_pi - C_pi sqrt(log n/n))
  double concentration_margin = 0.0;   // n eps_pi^2 / (4(1+eps_pi)) - log(2K)
  double k_decay = 0.0;                // K * n^{-C_pi^2/4}, needs < 1
};

// Finite-n proxies for the asymptotic conditions: each omega(1) quantity is
// required to be positive at the given n; trend checks over an n-grid are
// handled by evaluating this report per grid point.
AssumptionsReport check_assumptions(int n, int k, const std::vector<double>& rho,
                                    double gamma, double d_b_star, const EpsilonSet& eps);

}  // namespace sdsbm
