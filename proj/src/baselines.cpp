#include "sdsbm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace sdsbm {

namespace {

// y = A x via the out-neighbor lists
void apply(const AdjacencyMatrix& a, const double* x, double* y) {
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : a.out_neighbors(i)) {
      acc += x[j];
    }
    y[i] = acc;
  }
}

// y = A^T x
void apply_transpose(const AdjacencyMatrix& a, const double* x, double* y) {
  const int n = a.n();
  std::fill(y, y + n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double xi = x[i];
    if (xi == 0.0) {
      continue;
    }
    for (int j : a.out_neighbors(i)) {
      y[j] += xi;
    }
  }
}

// y = A A^T x
void apply_gram(const AdjacencyMatrix& a, const double* x, double* scratch, double* y) {
  apply_transpose(a, x, scratch);
  apply(a, scratch, y);
}

// Modified Gram-Schmidt, two passes. A column whose remainder is tiny
// relative to the matrix scale lies (numerically) in the span of the kept
// columns; normalizing the noise would wreck orthogonality, so such columns
// are replaced by canonical basis vectors instead. This keeps the subspace
// full-rank when the iterated operator is rank-deficient.
void orthonormalize(Matrix& q) {
  const std::size_t n = q.rows();
  const std::size_t r = q.cols();
  double scale = 0.0;
  for (std::size_t c = 0; c < r; ++c) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ss += q(i, c) * q(i, c);
    }
    scale = std::max(scale, std::sqrt(ss));
  }
  if (scale == 0.0) {
    scale = 1.0;
  }
  std::size_t fallback = 0;
  for (std::size_t c = 0; c < r; ++c) {
    double norm = 0.0;
    for (std::size_t attempt = 0; attempt <= n; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < c; ++p) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            dot += q(i, p) * q(i, c);
          }
          for (std::size_t i = 0; i < n; ++i) {
            q(i, c) -= dot * q(i, p);
          }
        }
      }
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        ss += q(i, c) * q(i, c);
      }
      norm = std::sqrt(ss);
      if (norm > 1e-10 * scale && norm > 0.0) {
        break;
      }
      for (std::size_t i = 0; i < n; ++i) {
        q(i, c) = 0.0;
      }
      q(fallback % n, c) = 1.0;
      ++fallback;
      // fresh basis vectors keep their own scale
      if (scale < 1.0) {
        scale = 1.0;
      }
    }
    const double inv = 1.0 / norm;
    for (std::size_t i = 0; i < n; ++i) {
      q(i, c) *= inv;
    }
  }
}

// Cyclic Jacobi eigendecomposition of a small symmetric matrix; returns
// eigenvalues in `diag` (descending) with matching columns in `vecs`.
void jacobi_eigen_symmetric(Matrix t, std::vector<double>& diag, Matrix& vecs) {
  const std::size_t r = t.rows();
  vecs = Matrix(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    vecs(i, i) = 1.0;
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      scale = std::max(scale, std::abs(t(i, j)));
    }
  }
  if (scale == 0.0) {
    diag.assign(r, 0.0);
    return;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < r; ++p) {
      for (std::size_t q = p + 1; q < r; ++q) {
        off = std::max(off, std::abs(t(p, q)));
      }
    }
    if (off <= 1e-15 * scale) {
      break;
    }
    for (std::size_t p = 0; p < r; ++p) {
      for (std::size_t q = p + 1; q < r; ++q) {
        if (std::abs(t(p, q)) <= 1e-18 * scale) {
          continue;
        }
        const double theta = (t(q, q) - t(p, p)) / (2.0 * t(p, q));
        const double sign = theta >= 0.0 ? 1.0 : -1.0;
        const double tan = sign / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double cos = 1.0 / std::sqrt(1.0 + tan * tan);
        const double sin = tan * cos;
        for (std::size_t i = 0; i < r; ++i) {
          const double tip = t(i, p), tiq = t(i, q);
          t(i, p) = cos * tip - sin * tiq;
          t(i, q) = sin * tip + cos * tiq;
        }
        for (std::size_t i = 0; i < r; ++i) {
          const double tpi = t(p, i), tqi = t(q, i);
          t(p, i) = cos * tpi - sin * tqi;
          t(q, i) = sin * tpi + cos * tqi;
        }
        for (std::size_t i = 0; i < r; ++i) {
          const double vip = vecs(i, p), viq = vecs(i, q);
          vecs(i, p) = cos * vip - sin * viq;
          vecs(i, q) = sin * vip + cos * viq;
        }
      }
    }
  }
  diag.resize(r);
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::vector<double> raw(r);
  for (std::size_t i = 0; i < r; ++i) {
    raw[i] = t(i, i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });
  Matrix sorted(r, r);
  for (std::size_t c = 0; c < r; ++c) {
    diag[c] = raw[order[c]];
    for (std::size_t i = 0; i < r; ++i) {
      sorted(i, c) = vecs(i, order[c]);
    }
  }
  vecs = std::move(sorted);
}

Matrix adjacency_rows_as_matrix(const AdjacencyMatrix& a) {
  const int n = a.n();
  Matrix rows{std::size_t(n), std::size_t(n), 0.0};
  for (int i = 0; i < n; ++i) {
    for (int j : a.out_neighbors(i)) {
      rows(std::size_t(i), std::size_t(j)) = 1.0;
    }
  }
  return rows;
}

}  // namespace

SvdResult truncated_svd(const AdjacencyMatrix& a, int k, double tol, int max_iters,
                        RandomStream rng) {
  const int n = a.n();
  if (k < 1 || k > n) {
    throw invalid_input("truncated_svd: K must lie in [1, n]");
  }
  const int r = std::min(n, k + 8);

  Matrix q{std::size_t(n), std::size_t(r)};
  for (std::size_t i = 0; i < std::size_t(n); ++i) {
    for (std::size_t c = 0; c < std::size_t(r); ++c) {
      q(i, c) = rng.gaussian();
    }
  }
  orthonormalize(q);

  std::vector<double> x(std::size_t(n), 0.0), scratch(std::size_t(n), 0.0), y(std::size_t(n), 0.0);
  Matrix ritz_vecs;
  std::vector<double> eigvals;
  Matrix u{std::size_t(n), std::size_t(r)};
  SvdResult result;

  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (iter = 1; iter <= max_iters; ++iter) {
    // Y = A A^T Q, column by column
    Matrix ynew{std::size_t(n), std::size_t(r)};
    for (int c = 0; c < r; ++c) {
      for (int i = 0; i < n; ++i) {
        x[std::size_t(i)] = q(std::size_t(i), std::size_t(c));
      }
      apply_gram(a, x.data(), scratch.data(), y.data());
      for (int i = 0; i < n; ++i) {
        ynew(std::size_t(i), std::size_t(c)) = y[std::size_t(i)];
      }
    }
    // Rayleigh-Ritz on the current subspace: T = Q^T Y
    Matrix t{std::size_t(r), std::size_t(r)};
    for (int c1 = 0; c1 < r; ++c1) {
      for (int c2 = 0; c2 < r; ++c2) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) {
          dot += q(std::size_t(i), std::size_t(c1)) * ynew(std::size_t(i), std::size_t(c2));
        }
        t(std::size_t(c1), std::size_t(c2)) = dot;
      }
    }
    // symmetrize away the accumulation noise
    for (int c1 = 0; c1 < r; ++c1) {
      for (int c2 = c1 + 1; c2 < r; ++c2) {
        double avg = 0.5 * (t(std::size_t(c1), std::size_t(c2)) + t(std::size_t(c2), std::size_t(c1)));
        t(std::size_t(c1), std::size_t(c2)) = avg;
        t(std::size_t(c2), std::size_t(c1)) = avg;
      }
    }
    jacobi_eigen_symmetric(t, eigvals, ritz_vecs);
    // Ritz vectors U = Q W
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < r; ++c) {
        double acc = 0.0;
        for (int w = 0; w < r; ++w) {
          acc += q(std::size_t(i), std::size_t(w)) * ritz_vecs(std::size_t(w), std::size_t(c));
        }
        u(std::size_t(i), std::size_t(c)) = acc;
      }
    }
    const double lambda1 = std::max(eigvals.empty() ? 0.0 : eigvals[0], 0.0);
    if (lambda1 <= 0.0) {
      // zero operator: the current orthonormal basis is as good as any
      residual = 0.0;
      break;
    }
    residual = 0.0;
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < n; ++i) {
        x[std::size_t(i)] = u(std::size_t(i), std::size_t(c));
      }
      apply_gram(a, x.data(), scratch.data(), y.data());
      double err = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = y[std::size_t(i)] - eigvals[std::size_t(c)] * x[std::size_t(i)];
        err += d * d;
      }
      residual = std::max(residual, std::sqrt(err) / lambda1);
    }
    if (residual <= tol) {
      break;
    }
    q = std::move(ynew);
    orthonormalize(q);
  }
  if (iter > max_iters) {
    throw convergence_error(
        "truncated_svd: no convergence after " + std::to_string(max_iters) +
            " iterations (residual " + std::to_string(residual) + ")",
        residual);
  }

  result.iterations = iter;
  result.residual = residual;
  result.singular_values.resize(std::size_t(k));
  result.left_vectors = Matrix(std::size_t(n), std::size_t(k));
  result.right_vectors = Matrix(std::size_t(n), std::size_t(k), 0.0);
  for (int c = 0; c < k; ++c) {
    const double lambda = eigvals.empty() ? 0.0 : std::max(eigvals[std::size_t(c)], 0.0);
    const double sigma = std::sqrt(lambda);
    result.singular_values[std::size_t(c)] = sigma;
    for (int i = 0; i < n; ++i) {
      result.left_vectors(std::size_t(i), std::size_t(c)) = u(std::size_t(i), std::size_t(c));
    }
    if (sigma > 1e-12) {
      for (int i = 0; i < n; ++i) {
        x[std::size_t(i)] = u(std::size_t(i), std::size_t(c));
      }
      apply_transpose(a, x.data(), scratch.data());
      const double inv = 1.0 / sigma;
      for (int i = 0; i < n; ++i) {
        result.right_vectors(std::size_t(i), std::size_t(c)) = scratch[std::size_t(i)] * inv;
      }
    }
  }
  return result;
}

LabelVector kma(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                RandomStream rng) {
  if (a.n() < k) {
    throw invalid_input("kma: needs n >= K");
  }
  Matrix rows = adjacency_rows_as_matrix(a);
  return kmeans(rows, k, opts, std::move(rng)).labels;
}

LabelVector spectral(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                     RandomStream rng) {
  const int n = a.n();
  if (n < k) {
    throw invalid_input("spectral: needs n >= K");
  }
  SvdResult svd = truncated_svd(a, k, 1e-10, 500, rng.fork(0x57d));
  Matrix emb{std::size_t(n), std::size_t(2 * k)};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      emb(std::size_t(i), std::size_t(c)) = svd.left_vectors(std::size_t(i), std::size_t(c));
      emb(std::size_t(i), std::size_t(k + c)) =
          svd.right_vectors(std::size_t(i), std::size_t(c));
    }
  }
  return kmeans(emb, k, opts, rng.fork(0x57e)).labels;
}

LabelVector dscore(const AdjacencyMatrix& a, int k, const KMeansOptions& opts,
                   RandomStream rng) {
  const int n = a.n();
  if (k < 2) {
    throw invalid_input("dscore: needs K >= 2");
  }
  if (n < k) {
    throw invalid_input("dscore: needs n >= K");
  }
  SvdResult svd = truncated_svd(a, k, 1e-10, 500, rng.fork(0xd5c));
  const double clip = std::log(double(n));
  const int cols = 2 * (k - 1);

  auto ratio = [&](double num, double den) {
    double v;
    if (den == 0.0) {
      v = num > 0.0 ? clip : (num < 0.0 ? -clip : 0.0);
    } else {
      v = num / den;
    }
    return std::clamp(v, -clip, clip);
  };

  Matrix emb{std::size_t(n), std::size_t(cols)};
  std::vector<char> degenerate(std::size_t(n), 0);
  int good = 0;
  for (int i = 0; i < n; ++i) {
    const double u1 = svd.left_vectors(std::size_t(i), 0);
    const double v1 = svd.right_vectors(std::size_t(i), 0);
    degenerate[std::size_t(i)] = std::abs(u1) < 1e-12;
    good += degenerate[std::size_t(i)] ? 0 : 1;
    for (int c = 1; c < k; ++c) {
      emb(std::size_t(i), std::size_t(c - 1)) =
          ratio(svd.left_vectors(std::size_t(i), std::size_t(c)), u1);
      emb(std::size_t(i), std::size_t(k - 1 + c - 1)) =
          ratio(svd.right_vectors(std::size_t(i), std::size_t(c)), v1);
    }
  }

  Matrix raw{std::size_t(n), std::size_t(2 * k)};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      raw(std::size_t(i), std::size_t(c)) = svd.left_vectors(std::size_t(i), std::size_t(c));
      raw(std::size_t(i), std::size_t(k + c)) =
          svd.right_vectors(std::size_t(i), std::size_t(c));
    }
  }

  if (good < k) {
    // not enough usable ratios (e.g. near-zero leading vector); cluster the
    // raw embedding directly
    return kmeans(raw, k, opts, rng.fork(0xd5e)).labels;
  }

  // cluster the ratio embedding of the well-behaved nodes
  Matrix good_rows{std::size_t(good), std::size_t(cols)};
  std::vector<int> good_index;
  good_index.reserve(std::size_t(good));
  for (int i = 0; i < n; ++i) {
    if (!degenerate[std::size_t(i)]) {
      std::copy_n(emb.row(std::size_t(i)).data(), std::size_t(cols),
                  good_rows.row(good_index.size()).data());
      good_index.push_back(i);
    }
  }
  ClusteringResult clustered = kmeans(good_rows, k, opts, rng.fork(0xd5e));

  LabelVector labels(std::size_t(n), -1);
  for (std::size_t g = 0; g < good_index.size(); ++g) {
    labels[std::size_t(good_index[g])] = clustered.labels[g];
  }
  if (good < n) {
    // place leftover nodes by the nearest cluster mean in the raw embedding
    Matrix centers{std::size_t(k), std::size_t(2 * k), 0.0};
    std::vector<int> counts(std::size_t(k), 0);
    for (std::size_t g = 0; g < good_index.size(); ++g) {
      const int c = clustered.labels[g];
      ++counts[std::size_t(c)];
      auto cen = centers.row(std::size_t(c));
      auto src = raw.row(std::size_t(good_index[g]));
      for (std::size_t t = 0; t < src.size(); ++t) {
        cen[t] += src[t];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (counts[std::size_t(c)] > 0) {
        for (double& v : centers.row(std::size_t(c))) {
          v /= double(counts[std::size_t(c)]);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (labels[std::size_t(i)] >= 0) {
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        double dd = squared_distance(raw.row(std::size_t(i)), centers.row(std::size_t(c)));
        if (dd < best) {
          best = dd;
          best_c = c;
        }
      }
      labels[std::size_t(i)] = best_c;
    }
  }
  return labels;
}

}  // namespace sdsbm
