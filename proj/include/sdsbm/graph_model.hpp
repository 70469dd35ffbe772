#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sdsbm/core.hpp"
#include "sdsbm/rng.hpp"

namespace sdsbm {

/// Community assignment, one entry per node, values in [0, K).
using LabelVector = std::vector<int>;

// K x K base connection probabilities plus the sparsity scale gamma.
// Row distinctness is required for identifiability but is not enforced
// here (degenerate blocks are legal inputs to diagnostics such as
// block_row_separation); the scenario registry guarantees it for every
// block it produces.
class BlockMatrix {
 public:
  BlockMatrix(int k, std::vector<double> entries, double gamma);

  int k() const { return k_; }
  double gamma() const { return gamma_; }
  double at(int from, int to) const { return entries_[std::size_t(from) * k_ + to]; }
  const std::vector<double>& entries() const { return entries_; }

  bool rows_distinct() const;

 private:
  int k_;
  std::vector<double> entries_;  // row-major K*K
  double gamma_;
};

/// Categorical assignment probabilities; strictly positive, sum to one.
class CommunityProbs {
 public:
  explicit CommunityProbs(std::vector<double> rho);

  static CommunityProbs uniform(int k);

  int k() const { return int(rho_.size()); }
  double at(int j) const { return rho_[std::size_t(j)]; }
  double rho_min() const { return rho_min_; }
  const std::vector<double>& values() const { return rho_; }

 private:
  std::vector<double> rho_;
  double rho_min_;
};

/// n x n edge probabilities, P_ij = gamma * B[z_i][z_j] (diagonal included
/// so rows stay block-constant).
struct ProbabilityMatrix {
  Matrix values;
};

// Binary directed/undirected graph with zero diagonal. Kept in a dual
// representation: bit-packed rows for popcount-based Gram products, and
// per-row out-neighbor lists for degree-bound traversals in sparse runs.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix(int n, bool directed);

  int n() const { return n_; }
  bool directed() const { return directed_; }

  bool at(int i, int j) const {
    return (bits_[std::size_t(i) * words_ + std::size_t(j) / 64] >> (j % 64)) & 1u;
  }

  /// Adds edge i->j (and j->i when undirected). Self-loops are rejected.
  void add_edge(int i, int j);

  const std::vector<int>& out_neighbors(int i) const { return out_[std::size_t(i)]; }
  int out_degree(int i) const { return int(out_[std::size_t(i)].size()); }
  std::span<const std::uint64_t> row_words(int i) const {
    return {bits_.data() + std::size_t(i) * words_, words_};
  }
  std::size_t words_per_row() const { return words_; }

  std::int64_t edge_count() const;

  bool operator==(const AdjacencyMatrix& other) const = default;

 private:
  void set_bit(int i, int j);

  int n_;
  bool directed_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<int>> out_;
};

/// n i.i.d. categorical labels; deterministic for a fixed stream state.
LabelVector sample_labels(const CommunityProbs& probs, int n, RandomStream& rng);

/// P_ij = gamma * B[labels[i]][labels[j]] for all i, j including i == j.
ProbabilityMatrix build_probability_matrix(const LabelVector& labels,
                                           const BlockMatrix& block);

/// Independent Bernoulli(P_ij) for every ordered pair i != j.
AdjacencyMatrix sample_directed(const ProbabilityMatrix& p, RandomStream& rng);

/// Bernoulli(P_ij) on i < j, mirrored; always symmetric.
AdjacencyMatrix sample_undirected(const ProbabilityMatrix& p, RandomStream& rng);

/// Minimum Euclidean distance between distinct rows of B (unscaled by gamma).
double block_row_separation(const BlockMatrix& block);

// Plain-text edge list: header "# n=<n> directed=<0|1>", then "i j" lines
// (0-based; undirected graphs store each edge once with i < j).
void write_edge_list(const AdjacencyMatrix& a, std::ostream& out);
AdjacencyMatrix read_edge_list(std::istream& in);

}  // namespace sdsbm
