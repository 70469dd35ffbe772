#include "sdsbm/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace sdsbm {

namespace {

struct LloydRun {
  LabelVector labels;
  Matrix centroids;
  double objective = 0.0;
  int iterations = 0;
};

void seed_plus_plus(const Matrix& rows, int k, RandomStream& rng, Matrix& centroids) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  std::vector<double> dist2(n, 0.0);
  std::size_t first = std::size_t(rng.uniform_below(n));
  std::copy_n(rows.row(first).data(), d, centroids.row(0).data());
  for (std::size_t i = 0; i < n; ++i) {
    dist2[i] = squared_distance(rows.row(i), centroids.row(0));
  }
  for (int c = 1; c < k; ++c) {
    CompensatedSum total;
    for (double v : dist2) {
      total.add(v);
    }
    std::size_t pick = 0;
    if (total.value() <= 0.0) {
      // all remaining points coincide with existing centroids
      pick = std::size_t(rng.uniform_below(n));
    } else {
      const double r = rng.uniform() * total.value();
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    }
    std::copy_n(rows.row(pick).data(), d, centroids.row(std::size_t(c)).data());
    for (std::size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], squared_distance(rows.row(i), centroids.row(std::size_t(c))));
    }
  }
}

void seed_random(const Matrix& rows, int k, RandomStream& rng, Matrix& centroids) {
  const std::size_t n = rows.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  for (int c = 0; c < k; ++c) {
    std::size_t j = std::size_t(c) + std::size_t(rng.uniform_below(n - std::size_t(c)));
    std::swap(order[std::size_t(c)], order[j]);
    std::copy_n(rows.row(order[std::size_t(c)]).data(), rows.cols(),
                centroids.row(std::size_t(c)).data());
  }
}

// Means anchored at the previous centroid: c + sum(x - c)/m. A cluster of
// identical rows keeps its centroid bit-exact, which is what makes the
// zero-noise objective land on 0 rather than ~1e-30.
void update_centroids(const Matrix& rows, const LabelVector& labels,
                      const std::vector<std::size_t>& counts, Matrix& centroids) {
  const std::size_t d = rows.cols();
  const std::size_t k = centroids.rows();
  Matrix delta(k, d, 0.0);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    auto dst = delta.row(std::size_t(labels[i]));
    auto cen = centroids.row(std::size_t(labels[i]));
    auto src = rows.row(i);
    for (std::size_t t = 0; t < d; ++t) {
      dst[t] += src[t] - cen[t];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      continue;
    }
    const double inv = 1.0 / double(counts[c]);
    auto cen = centroids.row(c);
    auto dst = delta.row(c);
    for (std::size_t t = 0; t < d; ++t) {
      cen[t] += dst[t] * inv;
    }
  }
}

LloydRun lloyd(const Matrix& rows, int k, const KMeansOptions& opts, RandomStream rng) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  LloydRun run;
  run.centroids = Matrix(std::size_t(k), d);
  if (opts.seeding == KMeansSeeding::plus_plus) {
    seed_plus_plus(rows, k, rng, run.centroids);
  } else {
    seed_random(rows, k, rng, run.centroids);
  }

  run.labels.assign(n, 0);
  LabelVector prev_labels;
  std::vector<double> point_dist2(n, 0.0);
  std::vector<std::size_t> counts(std::size_t(k), 0);
  double prev_objective = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    run.iterations = iter;
    // assignment
    std::fill(counts.begin(), counts.end(), std::size_t(0));
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        double dd = squared_distance(rows.row(i), run.centroids.row(std::size_t(c)));
        if (dd < best) {
          best = dd;
          best_c = c;
        }
      }
      run.labels[i] = best_c;
      point_dist2[i] = best;
      ++counts[std::size_t(best_c)];
    }
    // empty-cluster repair: reseed on the point farthest from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[std::size_t(c)] != 0) {
        continue;
      }
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (point_dist2[i] > point_dist2[far]) {
          far = i;
        }
      }
      --counts[std::size_t(run.labels[far])];
      run.labels[far] = c;
      ++counts[std::size_t(c)];
      std::copy_n(rows.row(far).data(), d, run.centroids.row(std::size_t(c)).data());
      point_dist2[far] = 0.0;
    }
    CompensatedSum obj;
    for (double v : point_dist2) {
      obj.add(v);
    }
    run.objective = obj.value();
    assert(run.objective <= prev_objective * (1.0 + 1e-12) + 1e-300);

    if (run.labels == prev_labels) {
      break;
    }
    const bool small_change =
        prev_objective - run.objective <= opts.tolerance * std::max(prev_objective, 1e-300) &&
        std::isfinite(prev_objective);
    prev_labels = run.labels;
    prev_objective = run.objective;
    if (small_change) {
      break;
    }
    update_centroids(rows, run.labels, counts, run.centroids);
  }

  // leave centroids as the means of the final assignment and report the
  // objective of exactly that state
  std::fill(counts.begin(), counts.end(), std::size_t(0));
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[std::size_t(run.labels[i])];
  }
  update_centroids(rows, run.labels, counts, run.centroids);
  CompensatedSum obj;
  for (std::size_t i = 0; i < n; ++i) {
    obj.add(squared_distance(rows.row(i), run.centroids.row(std::size_t(run.labels[i]))));
  }
  run.objective = obj.value();
  return run;
}

}  // namespace

ClusteringResult kmeans(const Matrix& rows, int k, const KMeansOptions& opts,
                        RandomStream rng) {
  const std::size_t n = rows.rows();
  if (k > int(n)) {
    throw invalid_input("kmeans: K exceeds the number of rows");
  }
  if (k < 2) {
    throw invalid_input("kmeans: K must be >= 2");
  }
  if (opts.restarts < 1 || opts.max_iters < 1) {
    throw invalid_input("kmeans: restarts and max_iters must be >= 1");
  }

  ClusteringResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.restarts; ++r) {
    LloydRun run = lloyd(rows, k, opts, rng.fork(std::uint64_t(r)));
    if (run.objective < best.objective) {
      best.labels = std::move(run.labels);
      best.centroids = std::move(run.centroids);
      best.objective = run.objective;
      best.iterations_used = run.iterations;
      best.restart_chosen = r;
    }
  }
  return best;
}

LabelVector kmp_pipeline(const AdjacencyMatrix& a, int k, std::optional<double> h,
                         const KMeansOptions& opts, RandomStream rng, double h_constant) {
  EstimatedMatrix p_tilde = estimate(a, h, h_constant);
  return kmeans(p_tilde.values, k, opts, std::move(rng)).labels;
}

}  // namespace sdsbm
