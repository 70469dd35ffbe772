#pragma once

#include <optional>

#include "sdsbm/core.hpp"
#include "sdsbm/estimator.hpp"
#include "sdsbm/graph_model.hpp"
#include "sdsbm/rng.hpp"

namespace sdsbm {

enum class KMeansSeeding {
  plus_plus,  // distance-squared weighted
  random,     // K distinct points uniformly
};

struct KMeansOptions {
  int restarts = 10;
  int max_iters = 100;
  double tolerance = 1e-8;  // relative objective change
  KMeansSeeding seeding = KMeansSeeding::plus_plus;
};

struct ClusteringResult {
  LabelVector labels;
  Matrix centroids;  // K x d
  double objective = 0.0;
  int iterations_used = 0;
  int restart_chosen = 0;
};

// Lloyd iterations from the chosen seeding, best of `restarts` runs by
// objective. Ties (assignment and restart selection) break toward the
// lowest index so results are reproducible for a fixed stream.
ClusteringResult kmeans(const Matrix& rows, int k, const KMeansOptions& opts,
                        RandomStream rng);

/// Neighborhood-smoothing estimate followed by k-means on its rows.
LabelVector kmp_pipeline(const AdjacencyMatrix& a, int k,
                         std::optional<double> h, const KMeansOptions& opts,
                         RandomStream rng, double h_constant = 1.0);

}  // namespace sdsbm
