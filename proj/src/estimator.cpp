#include "sdsbm/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sdsbm {

int NeighborhoodSet::min_size() const {
  int m = members.empty() ? 0 : int(members.front().size());
  for (const auto& list : members) {
    m = std::min(m, int(list.size()));
  }
  return m;
}

GramMatrix gram(const AdjacencyMatrix& a) {
  const int n = a.n();
  if (n < 2) {
    throw invalid_input("gram: needs n >= 2");
  }
  GramMatrix g;
  g.n = n;
  g.counts.assign(std::size_t(n) * n, 0);
  const std::size_t words = a.words_per_row();
  for (int i = 0; i < n; ++i) {
    auto ri = a.row_words(i);
    // diagonal is the out-degree
    g.counts[std::size_t(i) * n + i] = a.out_degree(i);
    for (int j = i + 1; j < n; ++j) {
      auto rj = a.row_words(j);
      std::int32_t c = 0;
      for (std::size_t w = 0; w < words; ++w) {
        c += std::popcount(ri[w] & rj[w]);
      }
      g.counts[std::size_t(i) * n + j] = c;
      g.counts[std::size_t(j) * n + i] = c;
    }
  }
  return g;
}

namespace {

// max over k in [lo, hi) of |gi[k] - gj[k]|, contiguous so it vectorizes
inline std::int32_t segment_max_abs_diff(const std::int32_t* gi, const std::int32_t* gj,
                                         int lo, int hi, std::int32_t m) {
  for (int k = lo; k < hi; ++k) {
    std::int32_t d = gi[k] - gj[k];
    if (d < 0) {
      d = -d;
    }
    if (d > m) {
      m = d;
    }
  }
  return m;
}

}  // namespace

DissimilarityMatrix dissimilarity_all(const AdjacencyMatrix& a, DissimilarityScale scale) {
  const int n = a.n();
  if (n < 3) {
    throw invalid_input("dissimilarity_all: needs n >= 3");
  }
  GramMatrix g = gram(a);
  DissimilarityMatrix d;
  d.n = n;
  d.scale = scale;
  d.values.assign(std::size_t(n) * n, 0.0);
  const double denom = scale == DissimilarityScale::normalized ? double(n) : 1.0;
  for (int i = 0; i < n; ++i) {
    const std::int32_t* gi = g.counts.data() + std::size_t(i) * n;
    for (int j = i + 1; j < n; ++j) {
      const std::int32_t* gj = g.counts.data() + std::size_t(j) * n;
      std::int32_t m = 0;
      m = segment_max_abs_diff(gi, gj, 0, i, m);
      m = segment_max_abs_diff(gi, gj, i + 1, j, m);
      m = segment_max_abs_diff(gi, gj, j + 1, n, m);
      double v = double(m) / denom;
      d.values[std::size_t(i) * n + j] = v;
      d.values[std::size_t(j) * n + i] = v;
    }
  }
  return d;
}

NeighborhoodSet neighborhoods(const DissimilarityMatrix& d, double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw invalid_input("neighborhoods: h must lie in (0,1)");
  }
  if (d.n < 2) {
    throw invalid_input("neighborhoods: needs n >= 2");
  }
  const int n = d.n;
  const int rank = int(std::ceil(h * (n - 1)));
  NeighborhoodSet result;
  result.bandwidth = h;
  result.members.resize(std::size_t(n));
  std::vector<double> buf(std::size_t(n) - 1);
  for (int i = 0; i < n; ++i) {
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) {
        buf[std::size_t(pos++)] = d.at(i, j);
      }
    }
    std::nth_element(buf.begin(), buf.begin() + (rank - 1), buf.end());
    const double q = buf[std::size_t(rank - 1)];
    auto& list = result.members[std::size_t(i)];
    list.reserve(std::size_t(rank));
    for (int j = 0; j < n; ++j) {
      if (j != i && d.at(i, j) <= q) {
        list.push_back(j);
      }
    }
  }
  return result;
}

EstimatedMatrix smooth(const AdjacencyMatrix& a, const NeighborhoodSet& nbhd) {
  const int n = a.n();
  EstimatedMatrix p{Matrix(std::size_t(n), std::size_t(n))};
  std::vector<std::int32_t> acc(std::size_t(n), 0);
  for (int i = 0; i < n; ++i) {
    const auto& list = nbhd.members[std::size_t(i)];
    if (list.empty()) {
      throw std::logic_error("smooth: empty neighborhood");
    }
    std::fill(acc.begin(), acc.end(), 0);
    for (int src : list) {
      for (int j : a.out_neighbors(src)) {
        ++acc[std::size_t(j)];
      }
    }
    const double inv = 1.0 / double(list.size());
    auto row = p.values.row(std::size_t(i));
    for (int j = 0; j < n; ++j) {
      row[std::size_t(j)] = double(acc[std::size_t(j)]) * inv;
    }
  }
  return p;
}

double default_bandwidth(int n, double h_constant) {
  return h_constant * std::sqrt(std::log(double(n)) / double(n));
}

EstimatedMatrix estimate(const AdjacencyMatrix& a, std::optional<double> h,
                         double h_constant) {
  if (a.n() < 3) {
    throw invalid_input("estimate: needs n >= 3");
  }
  const double bandwidth = h.value_or(default_bandwidth(a.n(), h_constant));
  DissimilarityMatrix d = dissimilarity_all(a);
  NeighborhoodSet nbhd = neighborhoods(d, bandwidth);
  return smooth(a, nbhd);
}

double max_row_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input("max_row_distance: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    worst = std::max(worst, squared_distance(a.row(i), b.row(i)));
  }
  return std::sqrt(worst);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_input("frobenius_distance: dimension mismatch");
  }
  CompensatedSum s;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ra = a.row(i);
    auto rb = b.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double d = ra[j] - rb[j];
      s.add(d * d);
    }
  }
  return std::sqrt(s.value());
}

double row_error_2inf(const ProbabilityMatrix& p, const EstimatedMatrix& p_tilde) {
  return max_row_distance(p.values, p_tilde.values);
}

double frobenius_error(const ProbabilityMatrix& p, const EstimatedMatrix& p_tilde) {
  return frobenius_distance(p.values, p_tilde.values);
}

void write_matrix_csv(const Matrix& m, std::ostream& out) {
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", row[j]);
      if (j > 0) {
        out << ',';
      }
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace sdsbm
