#include "sdsbm/metrics.hpp"

#include <algorithm>
#include <limits>

#include "sdsbm/core.hpp"

namespace sdsbm {

ContingencyTable ContingencyTable::build(const LabelVector& true_labels,
                                         const LabelVector& pred_labels) {
  if (true_labels.size() != pred_labels.size()) {
    throw invalid_input("contingency: label vectors differ in length");
  }
  ContingencyTable t;
  t.total = std::int64_t(true_labels.size());
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    if (true_labels[i] < 0 || pred_labels[i] < 0) {
      throw invalid_input("contingency: negative label");
    }
    t.k_true = std::max(t.k_true, true_labels[i] + 1);
    t.k_pred = std::max(t.k_pred, pred_labels[i] + 1);
  }
  t.counts.assign(std::size_t(t.k_true) * t.k_pred, 0);
  t.row_marginals.assign(std::size_t(t.k_true), 0);
  t.col_marginals.assign(std::size_t(t.k_pred), 0);
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    ++t.counts[std::size_t(true_labels[i]) * t.k_pred + pred_labels[i]];
    ++t.row_marginals[std::size_t(true_labels[i])];
    ++t.col_marginals[std::size_t(pred_labels[i])];
  }
  return t;
}

namespace {

inline std::int64_t choose2(std::int64_t m) { return m * (m - 1) / 2; }

// Min-cost assignment on a square cost matrix (shortest augmenting paths
// with potentials, O(K^3)); returns the optimal column for each row.
std::vector<int> hungarian_min_cost(const std::vector<std::int64_t>& cost, int k) {
  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(std::size_t(k) + 1, 0), v(std::size_t(k) + 1, 0);
  std::vector<int> match(std::size_t(k) + 1, 0);    // column -> row (1-based)
  std::vector<int> way(std::size_t(k) + 1, 0);
  for (int i = 1; i <= k; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(std::size_t(k) + 1, kInf);
    std::vector<char> used(std::size_t(k) + 1, false);
    do {
      used[std::size_t(j0)] = true;
      int i0 = match[std::size_t(j0)], j1 = 0;
      std::int64_t delta = kInf;
      for (int j = 1; j <= k; ++j) {
        if (!used[std::size_t(j)]) {
          std::int64_t cur = cost[std::size_t(i0 - 1) * k + (j - 1)] - u[std::size_t(i0)] -
                             v[std::size_t(j)];
          if (cur < minv[std::size_t(j)]) {
            minv[std::size_t(j)] = cur;
            way[std::size_t(j)] = j0;
          }
          if (minv[std::size_t(j)] < delta) {
            delta = minv[std::size_t(j)];
            j1 = j;
          }
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(match[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[std::size_t(j0)] != 0);
    do {
      int j1 = way[std::size_t(j0)];
      match[std::size_t(j0)] = match[std::size_t(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(std::size_t(k), -1);
  for (int j = 1; j <= k; ++j) {
    row_to_col[std::size_t(match[std::size_t(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

}  // namespace

double ari(const LabelVector& true_labels, const LabelVector& pred_labels) {
  if (true_labels.size() != pred_labels.size()) {
    throw invalid_input("ari: label vectors differ in length");
  }
  if (true_labels.size() < 2) {
    throw invalid_input("ari: needs at least two nodes");
  }
  ContingencyTable t = ContingencyTable::build(true_labels, pred_labels);
  std::int64_t sum_cells = 0;
  for (std::int64_t c : t.counts) {
    sum_cells += choose2(c);
  }
  std::int64_t sum_rows = 0;
  for (std::int64_t a : t.row_marginals) {
    sum_rows += choose2(a);
  }
  std::int64_t sum_cols = 0;
  for (std::int64_t b : t.col_marginals) {
    sum_cols += choose2(b);
  }
  const std::int64_t pairs = choose2(t.total);
  const double expected = double(sum_rows) * double(sum_cols) / double(pairs);
  const double maximum = 0.5 * (double(sum_rows) + double(sum_cols));
  if (maximum == expected) {
    // both partitions trivial and equal
    return 1.0;
  }
  return (double(sum_cells) - expected) / (maximum - expected);
}

std::int64_t best_match_count(const LabelVector& true_labels, const LabelVector& pred_labels,
                              int k) {
  if (k < 1) {
    throw invalid_input("best_match_count: K must be >= 1");
  }
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    if (true_labels[i] < 0 || true_labels[i] >= k || pred_labels[i] < 0 ||
        pred_labels[i] >= k) {
      throw invalid_input("best_match_count: label outside [0,K)");
    }
  }
  ContingencyTable t = ContingencyTable::build(true_labels, pred_labels);
  // maximise matched counts == minimise (max_count - count)
  std::int64_t max_cell = 0;
  std::vector<std::int64_t> counts(std::size_t(k) * k, 0);
  for (int a = 0; a < t.k_true; ++a) {
    for (int b = 0; b < t.k_pred; ++b) {
      counts[std::size_t(a) * k + b] = t.count(a, b);
      max_cell = std::max(max_cell, t.count(a, b));
    }
  }
  std::vector<std::int64_t> cost(std::size_t(k) * k, 0);
  for (std::size_t idx = 0; idx < cost.size(); ++idx) {
    cost[idx] = max_cell - counts[idx];
  }
  std::vector<int> assign = hungarian_min_cost(cost, k);
  std::int64_t matched = 0;
  for (int a = 0; a < k; ++a) {
    matched += counts[std::size_t(a) * k + assign[std::size_t(a)]];
  }
  return matched;
}

double permutation_accuracy(const LabelVector& true_labels, const LabelVector& pred_labels,
                            int k) {
  if (true_labels.size() != pred_labels.size()) {
    throw invalid_input("permutation_accuracy: label vectors differ in length");
  }
  if (true_labels.empty()) {
    throw invalid_input("permutation_accuracy: empty labels");
  }
  return double(best_match_count(true_labels, pred_labels, k)) / double(true_labels.size());
}

bool exact_recovery(const LabelVector& true_labels, const LabelVector& pred_labels, int k) {
  return best_match_count(true_labels, pred_labels, k) ==
         std::int64_t(true_labels.size());
}

}  // namespace sdsbm
