#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdsbm/clustering.hpp"
#include "sdsbm/graph_model.hpp"

namespace sdsbm {

enum class Method { kma, kmp, spectral, dscore };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

enum class BlockPattern { star, banded, diag_dominant, two_block };

// One row of the scenario table. Blocks, gamma and K are produced by rules
// so the same spec serves every n in a sweep.
struct ScenarioSpec {
  std::string name;
  BlockPattern pattern = BlockPattern::diag_dominant;
  bool growing_k = false;  // K = floor(log n), clamped to [2, max(2, n/10)]
  int fixed_k = 5;
  bool sparse_gamma = false;  // gamma = (log n / n)^{1/4}, else 1
  bool directed = true;

  int k_for(int n) const;
  double gamma_for(int n) const;
  BlockMatrix block_for(int n) const;
  CommunityProbs rho_for(int n) const;  // uniform 1/K
};

/// The five canonical scenarios (directed flag defaults to true; callers
/// flip it to run the undirected ensemble).
std::vector<ScenarioSpec> scenario_registry();
ScenarioSpec find_scenario(const std::string& name);

struct RunConfig {
  std::vector<int> n_grid = {100, 200, 400, 600, 800, 1000, 1500};
  int mc = 50;
  std::vector<Method> methods = {Method::kma, Method::kmp, Method::spectral,
                                 Method::dscore};
  std::uint64_t master_seed = 1;
  double h_constant = 1.0;
  KMeansOptions kmeans;
  int parallelism = 1;
  // Wall-clock capture makes records run-dependent; turn it off whenever
  // byte-identical output matters (golden files, determinism checks).
  bool measure_time = true;
};

struct RunRecord {
  std::string scenario;
  bool directed = true;
  int n = 0;
  Method method = Method::kmp;
  int replicate = 0;
  std::uint64_t seed = 0;
  double ari = 0.0;       // NaN marks a method failure
  double accuracy = 0.0;  // NaN on failure
  bool exact = false;
  std::int64_t elapsed_ms = 0;
};

struct AggregateRow {
  std::string scenario;
  bool directed = true;
  int n = 0;
  Method method = Method::kmp;
  double mean_ari = 0.0;
  double sd_ari = 0.0;
  double exact_rate = 0.0;
  double mean_elapsed_ms = 0.0;
  int errors = 0;  // failed replicates skipped by the aggregation
};

/// Per-replicate seed; methods never perturb graph generation because label
/// and edge streams are derived from this seed alone.
std::uint64_t replicate_seed(std::uint64_t master_seed, const std::string& scenario,
                             bool directed, int n, int replicate);

/// Full sweep over config.n_grid x replicates for one scenario; replicates
/// are farmed to `parallelism` workers, output is canonically sorted and
/// independent of scheduling. Method failures become NaN rows.
std::vector<RunRecord> run_monte_carlo(const ScenarioSpec& spec, const RunConfig& config);

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);

extern const char* const kRecordsCsvHeader;

void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_csv_file(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_records_csv(std::istream& in);
std::vector<RunRecord> read_records_csv_file(const std::string& path);

/// One SVG panel per (scenario, directedness); returns the written paths.
std::vector<std::string> emit_svg(const std::vector<AggregateRow>& aggregates,
                                  const std::string& path_prefix);

}  // namespace sdsbm
