#pragma once

#include <cstdint>
#include <vector>

#include "sdsbm/graph_model.hpp"

namespace sdsbm {

struct ContingencyTable {
  int k_true = 0;
  int k_pred = 0;
  std::int64_t total = 0;
  std::vector<std::int64_t> counts;  // row-major k_true x k_pred
  std::vector<std::int64_t> row_marginals;
  std::vector<std::int64_t> col_marginals;

  std::int64_t count(int t, int p) const { return counts[std::size_t(t) * k_pred + p]; }

  static ContingencyTable build(const LabelVector& true_labels,
                                const LabelVector& pred_labels);
};

/// Adjusted Rand Index; 1 for identical partitions, and defined as 1 in the
/// degenerate case where both partitions are a single cluster.
double ari(const LabelVector& true_labels, const LabelVector& pred_labels);

/// Largest number of nodes matched by any permutation of predicted labels,
/// found by optimal assignment on the contingency table.
std::int64_t best_match_count(const LabelVector& true_labels, const LabelVector& pred_labels,
                              int k);

/// max over label permutations of the fraction of agreeing nodes.
double permutation_accuracy(const LabelVector& true_labels, const LabelVector& pred_labels,
                            int k);

/// True iff the match count equals n exactly (integer comparison).
bool exact_recovery(const LabelVector& true_labels, const LabelVector& pred_labels, int k);

}  // namespace sdsbm
