#include "sdsbm/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace sdsbm {

BlockMatrix::BlockMatrix(int k, std::vector<double> entries, double gamma)
    : k_(k), entries_(std::move(entries)), gamma_(gamma) {
  if (k < 1) {
    throw invalid_input("BlockMatrix: K must be >= 1");
  }
  if (entries_.size() != std::size_t(k) * std::size_t(k)) {
    throw invalid_input("BlockMatrix: entries must be K*K");
  }
  for (double b : entries_) {
    if (!(b >= 0.0 && b <= 1.0)) {
      throw invalid_input("BlockMatrix: entries must lie in [0,1]");
    }
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw invalid_input("BlockMatrix: gamma must lie in (0,1]");
  }
}

bool BlockMatrix::rows_distinct() const {
  for (int a = 0; a < k_; ++a) {
    for (int b = a + 1; b < k_; ++b) {
      bool equal = true;
      for (int c = 0; c < k_ && equal; ++c) {
        equal = at(a, c) == at(b, c);
      }
      if (equal) {
        return false;
      }
    }
  }
  return true;
}

CommunityProbs::CommunityProbs(std::vector<double> rho) : rho_(std::move(rho)) {
  if (rho_.empty()) {
    throw invalid_input("CommunityProbs: empty probability vector");
  }
  double sum = 0.0;
  rho_min_ = rho_[0];
  for (double r : rho_) {
    if (!(r > 0.0)) {
      throw invalid_input("CommunityProbs: entries must be strictly positive");
    }
    sum += r;
    rho_min_ = std::min(rho_min_, r);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw invalid_input("CommunityProbs: probabilities must sum to 1");
  }
}

CommunityProbs CommunityProbs::uniform(int k) {
  if (k < 1) {
    throw invalid_input("CommunityProbs: K must be >= 1");
  }
  // 1/k repeated k times sums to 1 only up to rounding; normalize the
  // remainder onto the last entry so the 1e-12 invariant holds exactly.
  std::vector<double> rho(std::size_t(k), 1.0 / k);
  double sum = 0.0;
  for (int j = 0; j + 1 < k; ++j) {
    sum += rho[std::size_t(j)];
  }
  rho[std::size_t(k) - 1] = 1.0 - sum;
  return CommunityProbs(std::move(rho));
}

AdjacencyMatrix::AdjacencyMatrix(int n, bool directed)
    : n_(n), directed_(directed), words_((std::size_t(n) + 63) / 64),
      bits_(std::size_t(n) * words_, 0), out_(std::size_t(n)) {
  if (n < 1) {
    throw invalid_input("AdjacencyMatrix: n must be >= 1");
  }
}

void AdjacencyMatrix::set_bit(int i, int j) {
  bits_[std::size_t(i) * words_ + std::size_t(j) / 64] |= std::uint64_t(1) << (j % 64);
  out_[std::size_t(i)].push_back(j);
}

void AdjacencyMatrix::add_edge(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw invalid_input("AdjacencyMatrix: node index out of range");
  }
  if (i == j) {
    throw invalid_input("AdjacencyMatrix: self-loops are not allowed");
  }
  if (at(i, j)) {
    return;
  }
  set_bit(i, j);
  if (!directed_ && !at(j, i)) {
    set_bit(j, i);
  }
}

std::int64_t AdjacencyMatrix::edge_count() const {
  std::int64_t total = 0;
  for (const auto& row : out_) {
    total += std::int64_t(row.size());
  }
  return total;
}

LabelVector sample_labels(const CommunityProbs& probs, int n, RandomStream& rng) {
  if (n < 1) {
    throw invalid_input("sample_labels: n must be >= 1");
  }
  LabelVector labels(std::size_t(n), 0);
  int k = probs.k();
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    double acc = 0.0;
    int z = k - 1;  // fallback for rounding at the top of the CDF
    for (int j = 0; j < k; ++j) {
      acc += probs.at(j);
      if (u < acc) {
        z = j;
        break;
      }
    }
    labels[std::size_t(i)] = z;
  }
  return labels;
}

ProbabilityMatrix build_probability_matrix(const LabelVector& labels,
                                           const BlockMatrix& block) {
  const int n = int(labels.size());
  for (int z : labels) {
    if (z < 0 || z >= block.k()) {
      throw invalid_input("build_probability_matrix: label out of range");
    }
  }
  ProbabilityMatrix p{Matrix(std::size_t(n), std::size_t(n))};
  const double gamma = block.gamma();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p.values(std::size_t(i), std::size_t(j)) =
          gamma * block.at(labels[std::size_t(i)], labels[std::size_t(j)]);
    }
  }
  return p;
}

AdjacencyMatrix sample_directed(const ProbabilityMatrix& p, RandomStream& rng) {
  const int n = int(p.values.rows());
  AdjacencyMatrix a(n, /*directed=*/true);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        continue;
      }
      if (rng.uniform() < p.values(std::size_t(i), std::size_t(j))) {
        a.add_edge(i, j);
      }
    }
  }
  return a;
}

AdjacencyMatrix sample_undirected(const ProbabilityMatrix& p, RandomStream& rng) {
  const int n = int(p.values.rows());
  AdjacencyMatrix a(n, /*directed=*/false);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p.values(std::size_t(i), std::size_t(j))) {
        a.add_edge(i, j);
      }
    }
  }
  return a;
}

double block_row_separation(const BlockMatrix& block) {
  const int k = block.k();
  if (k < 2) {
    throw invalid_input("block_row_separation: needs K >= 2");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      double sq = 0.0;
      for (int c = 0; c < k; ++c) {
        double d = block.at(a, c) - block.at(b, c);
        sq += d * d;
      }
      best = std::min(best, std::sqrt(sq));
    }
  }
  return best;
}

void write_edge_list(const AdjacencyMatrix& a, std::ostream& out) {
  out << "# n=" << a.n() << " directed=" << (a.directed() ? 1 : 0) << "\n";
  for (int i = 0; i < a.n(); ++i) {
    for (int j : a.out_neighbors(i)) {
      if (!a.directed() && j < i) {
        continue;
      }
      out << i << ' ' << j << '\n';
    }
  }
}

AdjacencyMatrix read_edge_list(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw invalid_input("edge list: missing header line");
  }
  int n = -1;
  int directed_flag = -1;
  {
    std::istringstream hs(header);
    std::string hash, tok;
    hs >> hash;
    if (hash != "#") {
      throw invalid_input("edge list: header must start with '#'");
    }
    while (hs >> tok) {
      if (tok.rfind("n=", 0) == 0) {
        n = std::stoi(tok.substr(2));
      } else if (tok.rfind("directed=", 0) == 0) {
        directed_flag = std::stoi(tok.substr(9));
      }
    }
  }
  if (n < 1 || (directed_flag != 0 && directed_flag != 1)) {
    throw invalid_input("edge list: header must carry n=<n> directed=<0|1>");
  }
  AdjacencyMatrix a(n, directed_flag == 1);
  int i = 0, j = 0;
  while (in >> i >> j) {
    a.add_edge(i, j);
  }
  return a;
}

}  // namespace sdsbm
