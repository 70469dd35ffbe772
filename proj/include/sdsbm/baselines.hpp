#pragma once

#include <vector>

#include "sdsbm/clustering.hpp"
#include "sdsbm/core.hpp"
#include "sdsbm/graph_model.hpp"
#include "sdsbm/rng.hpp"

namespace sdsbm {

struct SvdResult {
  std::vector<double> singular_values;  // length K, nonincreasing
  Matrix left_vectors;                  // n x K, orthonormal columns
  Matrix right_vectors;                 // n x K; zero column when sigma <= 1e-12
  int iterations = 0;
  double residual = 0.0;  // max_k ||AA^T u_k - lambda_k u_k|| / lambda_1 at exit
};

// Top-K singular triplets by randomized subspace iteration on A A^T with
// re-orthonormalization; right vectors recovered as v_k = A^T u_k / sigma_k.
// Throws convergence_error (carrying the residual) past max_iters.
SvdResult truncated_svd(const AdjacencyMatrix& a, int k, double tol = 1e-10,
                        int max_iters = 500, RandomStream rng = RandomStream(0));

/// K-means directly on the binary rows of A.
LabelVector kma(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                RandomStream rng);

/// K-means on the concatenated [U | V] singular-vector embedding, which
/// carries both out- and in-connectivity of each node.
LabelVector spectral(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                     RandomStream rng);

// Entrywise ratios of singular vectors: R_out[i][k] = u_{k+1}(i)/u_1(i) and
// the analogue from right vectors, clipped to [-log n, log n]; K-means on
// the concatenated 2(K-1) columns. Nodes with |u_1(i)| < 1e-12 are assigned
// afterwards by the nearest cluster mean in the raw [U | V] embedding.
LabelVector dscore(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                   RandomStream rng);

}  // namespace sdsbm
