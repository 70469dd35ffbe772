#include "sdsbm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "sdsbm/baselines.hpp"
#include "sdsbm/estimator.hpp"
#include "sdsbm/metrics.hpp"
#include "sdsbm/svg.hpp"

namespace sdsbm {

const char* method_name(Method m) {
  switch (m) {
    case Method::kma: return "KMA";
    case Method::kmp: return "KMP";
    case Method::spectral: return "SPECTRAL";
    case Method::dscore: return "DSCORE";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "KMA") return Method::kma;
  if (name == "KMP") return Method::kmp;
  if (name == "SPECTRAL") return Method::spectral;
  if (name == "DSCORE") return Method::dscore;
  throw invalid_input("unknown method: " + name);
}

int ScenarioSpec::k_for(int n) const {
  if (!growing_k) {
    return fixed_k;
  }
  const int by_log = int(std::floor(std::log(double(n))));
  const int cap = std::max(2, n / 10);
  return std::clamp(by_log, 2, cap);
}

double ScenarioSpec::gamma_for(int n) const {
  return sparse_gamma ? std::pow(std::log(double(n)) / double(n), 0.25) : 1.0;
}

BlockMatrix ScenarioSpec::block_for(int n) const {
  const int k = k_for(n);
  std::vector<double> b(std::size_t(k) * k, 0.0);
  auto set = [&](int r, int c, double v) { b[std::size_t(r) * k + c] = v; };
  switch (pattern) {
    case BlockPattern::star:
      // hub community 0; spokes tied to the hub with slowly decaying weight
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          if (r == 0 && c == 0) {
            set(r, c, 0.90);
          } else if (r != 0 && c != 0) {
            set(r, c, 0.85);
          } else if (r != 0) {
            set(r, c, 0.90 - 0.01 * r);
          } else {
            set(r, c, 0.90 - 0.01 * c);
          }
        }
      }
      break;
    case BlockPattern::banded:
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          const int gap = std::abs(r - c);
          set(r, c, gap <= 1 ? 0.5 : 0.5 - 0.1 * (gap - 1));
        }
      }
      break;
    case BlockPattern::diag_dominant:
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          set(r, c, r == c ? 0.9 : 0.6);
        }
      }
      break;
    case BlockPattern::two_block:
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          set(r, c, r == c ? 0.1 : 0.3);
        }
      }
      break;
  }
  return BlockMatrix(k, std::move(b), gamma_for(n));
}

CommunityProbs ScenarioSpec::rho_for(int n) const {
  return CommunityProbs::uniform(k_for(n));
}

std::vector<ScenarioSpec> scenario_registry() {
  std::vector<ScenarioSpec> specs;
  specs.push_back({"star", BlockPattern::star, false, 5, false, true});
  specs.push_back({"banded", BlockPattern::banded, false, 5, false, true});
  specs.push_back({"diag_dominant", BlockPattern::diag_dominant, false, 5, false, true});
  specs.push_back({"sparse_two_block", BlockPattern::two_block, false, 2, true, true});
  specs.push_back({"growing_k", BlockPattern::star, true, 0, false, true});
  return specs;
}

ScenarioSpec find_scenario(const std::string& name) {
  for (const auto& spec : scenario_registry()) {
    if (spec.name == name) {
      return spec;
    }
  }
  throw invalid_input("unknown scenario: " + name);
}

std::uint64_t replicate_seed(std::uint64_t master_seed, const std::string& scenario,
                             bool directed, int n, int replicate) {
  return seed_mix({master_seed, fnv1a64(scenario), directed ? 1ull : 0ull,
                   std::uint64_t(n), std::uint64_t(replicate)});
}

namespace {

constexpr std::uint64_t kLabelStream = 0;
constexpr std::uint64_t kEdgeStream = 1;

std::uint64_t method_stream(Method m) { return 100 + std::uint64_t(m); }

LabelVector run_method(Method m, const AdjacencyMatrix& a, int k,
                       const KMeansOptions& opts, double h_constant, RandomStream rng) {
  switch (m) {
    case Method::kma: return kma(a, k, opts, std::move(rng));
    case Method::kmp:
      return kmp_pipeline(a, k, std::nullopt, opts, std::move(rng), h_constant);
    case Method::spectral: return spectral(a, k, opts, std::move(rng));
    case Method::dscore: return dscore(a, k, opts, std::move(rng));
  }
  throw std::logic_error("unreachable method");
}

std::vector<RunRecord> run_replicate(const ScenarioSpec& spec, const RunConfig& config,
                                     int n, int replicate) {
  const std::uint64_t seed =
      replicate_seed(config.master_seed, spec.name, spec.directed, n, replicate);
  const int k = spec.k_for(n);
  const BlockMatrix block = spec.block_for(n);
  const CommunityProbs rho = spec.rho_for(n);

  RandomStream label_rng(seed, kLabelStream);
  const LabelVector truth = sample_labels(rho, n, label_rng);
  const ProbabilityMatrix p = build_probability_matrix(truth, block);
  RandomStream edge_rng(seed, kEdgeStream);
  const AdjacencyMatrix a = spec.directed ? sample_directed(p, edge_rng)
                                          : sample_undirected(p, edge_rng);

  std::vector<RunRecord> records;
  records.reserve(config.methods.size());
  for (Method m : config.methods) {
    RunRecord rec;
    rec.scenario = spec.name;
    rec.directed = spec.directed;
    rec.n = n;
    rec.method = m;
    rec.replicate = replicate;
    rec.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      LabelVector predicted =
          run_method(m, a, k, config.kmeans, config.h_constant,
                     RandomStream(seed, method_stream(m)));
      rec.ari = ari(truth, predicted);
      rec.accuracy = permutation_accuracy(truth, predicted, k);
      rec.exact = exact_recovery(truth, predicted, k);
    } catch (const std::exception&) {
      rec.ari = std::numeric_limits<double>::quiet_NaN();
      rec.accuracy = std::numeric_limits<double>::quiet_NaN();
      rec.exact = false;
    }
    if (config.measure_time) {
      rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

bool record_before(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.scenario, a.directed, a.n, a.method, a.replicate) <
         std::tie(b.scenario, b.directed, b.n, b.method, b.replicate);
}

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<RunRecord> run_monte_carlo(const ScenarioSpec& spec, const RunConfig& config) {
  if (config.mc < 1) {
    throw invalid_input("run_monte_carlo: mc must be >= 1");
  }
  if (config.methods.empty()) {
    throw invalid_input("run_monte_carlo: no methods selected");
  }
  for (std::size_t i = 0; i + 1 < config.n_grid.size(); ++i) {
    if (config.n_grid[i] >= config.n_grid[i + 1]) {
      throw invalid_input("run_monte_carlo: n grid must be strictly increasing");
    }
  }
  for (int n : config.n_grid) {
    if (n < 3) {
      throw invalid_input("run_monte_carlo: n must be >= 3");
    }
  }

  struct Task {
    int n;
    int replicate;
  };
  std::vector<Task> tasks;
  tasks.reserve(config.n_grid.size() * std::size_t(config.mc));
  for (int n : config.n_grid) {
    for (int rep = 0; rep < config.mc; ++rep) {
      tasks.push_back({n, rep});
    }
  }

  std::vector<std::vector<RunRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) {
        break;
      }
      slots[idx] = run_replicate(spec, config, tasks[idx].n, tasks[idx].replicate);
    }
  };

  const int jobs = std::max(1, config.parallelism);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }

  std::vector<RunRecord> records;
  records.reserve(tasks.size() * config.methods.size());
  for (auto& slot : slots) {
    for (auto& rec : slot) {
      records.push_back(std::move(rec));
    }
  }
  std::sort(records.begin(), records.end(), record_before);
  return records;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
  using Key = std::tuple<std::string, bool, int, Method>;
  struct Bucket {
    std::vector<double> aris;
    std::int64_t elapsed_total = 0;
    int exact_count = 0;
    int errors = 0;
  };
  std::map<Key, Bucket> buckets;
  for (const auto& rec : records) {
    Bucket& b = buckets[{rec.scenario, rec.directed, rec.n, rec.method}];
    if (std::isnan(rec.ari)) {
      ++b.errors;
      continue;
    }
    b.aris.push_back(rec.ari);
    b.elapsed_total += rec.elapsed_ms;
    b.exact_count += rec.exact ? 1 : 0;
  }
  std::vector<AggregateRow> rows;
  rows.reserve(buckets.size());
  for (const auto& [key, b] : buckets) {
    AggregateRow row;
    row.scenario = std::get<0>(key);
    row.directed = std::get<1>(key);
    row.n = std::get<2>(key);
    row.method = std::get<3>(key);
    row.errors = b.errors;
    const std::size_t m = b.aris.size();
    if (m == 0) {
      row.mean_ari = std::numeric_limits<double>::quiet_NaN();
      row.sd_ari = 0.0;
      row.exact_rate = 0.0;
      row.mean_elapsed_ms = 0.0;
    } else {
      double sum = 0.0;
      for (double v : b.aris) {
        sum += v;
      }
      row.mean_ari = sum / double(m);
      double ss = 0.0;
      for (double v : b.aris) {
        ss += (v - row.mean_ari) * (v - row.mean_ari);
      }
      row.sd_ari = m > 1 ? std::sqrt(ss / double(m - 1)) : 0.0;
      row.exact_rate = double(b.exact_count) / double(m);
      row.mean_elapsed_ms = double(b.elapsed_total) / double(m);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* const kRecordsCsvHeader =
    "scenario,directed,n,method,replicate,seed,ari,accuracy,exact,elapsed_ms";

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  std::vector<RunRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), record_before);
  out << kRecordsCsvHeader << '\n';
  for (const auto& r : sorted) {
    out << r.scenario << ',' << (r.directed ? 1 : 0) << ',' << r.n << ','
        << method_name(r.method) << ',' << r.replicate << ',' << r.seed << ','
        << format_real(r.ari) << ',' << format_real(r.accuracy) << ','
        << (r.exact ? 1 : 0) << ',' << r.elapsed_ms << '\n';
  }
}

void write_csv_file(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  write_csv(records, out);
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordsCsvHeader) {
    throw invalid_input("records csv: unexpected header");
  }
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    fields.push_back(cur);
    if (fields.size() != 10) {
      throw invalid_input("records csv: malformed row: " + line);
    }
    RunRecord r;
    r.scenario = fields[0];
    r.directed = fields[1] == "1";
    r.n = std::stoi(fields[2]);
    r.method = method_from_name(fields[3]);
    r.replicate = std::stoi(fields[4]);
    r.seed = std::stoull(fields[5]);
    r.ari = fields[6].empty() ? std::numeric_limits<double>::quiet_NaN()
                              : std::stod(fields[6]);
    r.accuracy = fields[7].empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : std::stod(fields[7]);
    r.exact = fields[8] == "1";
    r.elapsed_ms = std::stoll(fields[9]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> read_records_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  return read_records_csv(in);
}

std::vector<std::string> emit_svg(const std::vector<AggregateRow>& aggregates,
                                  const std::string& path_prefix) {
  static const std::map<Method, std::string> kColors = {
      {Method::kma, "#1f77b4"},
      {Method::kmp, "#d62728"},
      {Method::spectral, "#2ca02c"},
      {Method::dscore, "#9467bd"},
  };

  using PanelKey = std::pair<std::string, bool>;
  std::map<PanelKey, std::map<Method, ChartSeries>> panels;
  for (const auto& row : aggregates) {
    if (std::isnan(row.mean_ari)) {
      continue;
    }
    auto& series = panels[{row.scenario, row.directed}][row.method];
    if (series.label.empty()) {
      series.label = method_name(row.method);
      series.color = kColors.at(row.method);
    }
    series.x.push_back(double(row.n));
    series.mean.push_back(row.mean_ari);
    series.sd.push_back(row.sd_ari);
  }

  std::vector<std::string> written;
  for (auto& [key, by_method] : panels) {
    std::vector<ChartSeries> series;
    for (auto& [method, s] : by_method) {
      // points arrive grouped by n in map order; sort by x to be safe
      std::vector<std::size_t> idx(s.x.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
      }
      std::sort(idx.begin(), idx.end(),
                [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
      ChartSeries ordered = s;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        ordered.x[i] = s.x[idx[i]];
        ordered.mean[i] = s.mean[idx[i]];
        ordered.sd[i] = s.sd[idx[i]];
      }
      series.push_back(std::move(ordered));
    }
    const std::string mode = key.second ? "directed" : "undirected";
    const std::string title = key.first + " (" + mode + ")";
    const std::string svg =
        render_line_chart(title, "n", "ARI", -0.1, 1.05, series);
    const std::string path = path_prefix + key.first + "_" + mode + ".svg";
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + path);
    }
    out << svg;
    if (!out.good()) {
      throw std::runtime_error("write failed: " + path);
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace sdsbm
