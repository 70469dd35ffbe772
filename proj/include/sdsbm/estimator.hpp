#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sdsbm/core.hpp"
#include "sdsbm/graph_model.hpp"

namespace sdsbm {

// (1/n) A A^T, held as exact integer inner products so downstream
// comparisons stay free of rounding until the single final division.
struct GramMatrix {
  int n = 0;
  std::vector<std::int32_t> counts;  // row-major n*n, counts[i*n+j] = <A_i., A_j.>

  std::int32_t count(int i, int j) const { return counts[std::size_t(i) * n + j]; }
  double value(int i, int j) const { return double(count(i, j)) / n; }
};

enum class DissimilarityScale {
  normalized,  // d(i,j) = max_k |G_ik - G_jk| on the (1/n)AA^T scale
  raw,         // integer inner-product scale (same ordering, so same neighborhoods)
};

struct DissimilarityMatrix {
  int n = 0;
  DissimilarityScale scale = DissimilarityScale::normalized;
  std::vector<double> values;  // row-major, symmetric, zero diagonal

  double at(int i, int j) const { return values[std::size_t(i) * n + j]; }
};

/// Per-node index lists N_i (i excluded, ties at the quantile included).
struct NeighborhoodSet {
  double bandwidth = 0.0;
  std::vector<std::vector<int>> members;

  int min_size() const;
};

/// Row averages of A over each node's neighborhood; entries are exact
/// rationals with denominator |N_i| evaluated in double precision.
struct EstimatedMatrix {
  Matrix values;
};

GramMatrix gram(const AdjacencyMatrix& a);

DissimilarityMatrix dissimilarity_all(const AdjacencyMatrix& a,
                                      DissimilarityScale scale = DissimilarityScale::normalized);

/// Quantile rule: q_i(h) is the ceil(h*(n-1))-th smallest of {d(i,j) : j != i};
/// every tie at q_i(h) joins N_i, so |N_i| >= ceil(h*(n-1)) deterministically.
NeighborhoodSet neighborhoods(const DissimilarityMatrix& d, double h);

EstimatedMatrix smooth(const AdjacencyMatrix& a, const NeighborhoodSet& nbhd);

/// Default bandwidth used when h is absent.
double default_bandwidth(int n, double h_constant = 1.0);

/// gram -> dissimilarity -> neighborhoods -> smooth.
/// Without an explicit h, uses h = h_constant * sqrt(log n / n).
EstimatedMatrix estimate(const AdjacencyMatrix& a, std::optional<double> h = std::nullopt,
                         double h_constant = 1.0);

/// max_i ||P~_i. - P_i.||_2
double row_error_2inf(const ProbabilityMatrix& p, const EstimatedMatrix& p_tilde);
double frobenius_error(const ProbabilityMatrix& p, const EstimatedMatrix& p_tilde);

/// Matrix-level versions for callers that hold raw matrices.
double max_row_distance(const Matrix& a, const Matrix& b);
double frobenius_distance(const Matrix& a, const Matrix& b);

/// CSV: n rows of n comma-separated values, 9 significant digits.
void write_matrix_csv(const Matrix& m, std::ostream& out);

}  // namespace sdsbm
