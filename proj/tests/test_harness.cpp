#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sdsbm/harness.hpp"
#include "support/oracles.hpp"

using namespace sdsbm;

namespace {

RunConfig small_config() {
  RunConfig config;
  config.n_grid = {40};
  config.mc = 2;
  config.methods = {Method::kma, Method::kmp};
  config.master_seed = 777;
  config.parallelism = 1;
  config.measure_time = false;
  return config;
}

std::string csv_string(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  write_csv(records, out);
  return out.str();
}

}  // namespace

TEST_CASE("registry lists the five scenarios with their table parameters") {
  auto specs = scenario_registry();
  REQUIRE(specs.size() == 5);
  CHECK(specs[0].name == "star");
  CHECK(specs[1].name == "banded");
  CHECK(specs[2].name == "diag_dominant");
  CHECK(specs[3].name == "sparse_two_block");
  CHECK(specs[4].name == "growing_k");

  // diagonal-dominant pattern
  BlockMatrix diag = find_scenario("diag_dominant").block_for(600);
  REQUIRE(diag.k() == 5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      CHECK(diag.at(r, c) == (r == c ? 0.9 : 0.6));
    }
  }

  // star pattern, hub at community 0
  BlockMatrix star = find_scenario("star").block_for(600);
  CHECK(star.at(0, 0) == 0.90);
  CHECK(star.at(2, 3) == 0.85);
  CHECK(star.at(3, 0) == doctest::Approx(0.87));
  CHECK(star.at(0, 4) == doctest::Approx(0.86));

  // banded pattern
  BlockMatrix banded = find_scenario("banded").block_for(600);
  CHECK(banded.at(1, 2) == 0.5);
  CHECK(banded.at(2, 2) == 0.5);
  CHECK(banded.at(0, 4) == doctest::Approx(0.2));

  // sparse two-block gamma rule
  ScenarioSpec sparse = find_scenario("sparse_two_block");
  CHECK(sparse.fixed_k == 2);
  CHECK(sparse.gamma_for(1500) ==
        doctest::Approx(std::pow(std::log(1500.0) / 1500.0, 0.25)).epsilon(1e-12));
  BlockMatrix two = sparse.block_for(1500);
  CHECK(two.at(0, 0) == 0.1);
  CHECK(two.at(0, 1) == 0.3);

  // growing K rule
  ScenarioSpec growing = find_scenario("growing_k");
  CHECK(growing.k_for(1500) == 7);
  CHECK(growing.k_for(100) == 4);
  CHECK(growing.k_for(20) == 2);  // n/10 cap

  for (const auto& spec : specs) {
    for (int n : {100, 400, 1500}) {
      BlockMatrix block = spec.block_for(n);
      CHECK(block.rows_distinct());
      CommunityProbs rho = spec.rho_for(n);
      CHECK(rho.k() == spec.k_for(n));
      CHECK(rho.rho_min() == doctest::Approx(1.0 / spec.k_for(n)));
    }
  }
  CHECK_THROWS_AS(find_scenario("nope"), invalid_input);
}

TEST_CASE("single replicate, single method produces exactly one record") {
  ScenarioSpec spec = find_scenario("diag_dominant");
  RunConfig config = small_config();
  config.methods = {Method::kmp};
  config.mc = 1;
  auto records = run_monte_carlo(spec, config);
  REQUIRE(records.size() == 1);
  CHECK(records[0].scenario == "diag_dominant");
  CHECK(records[0].n == 40);
  CHECK(records[0].method == Method::kmp);
  CHECK(records[0].replicate == 0);
  CHECK(records[0].elapsed_ms == 0);  // timing off
}

TEST_CASE("record invariants hold on a small run") {
  ScenarioSpec spec = find_scenario("banded");
  RunConfig config = small_config();
  config.methods = {Method::kma, Method::kmp, Method::spectral, Method::dscore};
  config.n_grid = {30, 40};
  auto records = run_monte_carlo(spec, config);
  REQUIRE(records.size() == 2 * 2 * 4);
  const int k = spec.k_for(30);
  for (const auto& rec : records) {
    REQUIRE_FALSE(std::isnan(rec.ari));
    CHECK(rec.ari <= 1.0);
    CHECK(rec.accuracy >= 1.0 / k);
    CHECK(rec.accuracy <= 1.0);
    CHECK(rec.exact == (rec.accuracy == 1.0));
    CHECK(rec.seed == replicate_seed(777, "banded", true, rec.n, rec.replicate));
  }
}

TEST_CASE("same seed gives byte-identical csv independent of worker count") {
  ScenarioSpec spec = find_scenario("diag_dominant");
  RunConfig config = small_config();
  auto base = csv_string(run_monte_carlo(spec, config));
  config.parallelism = 4;
  CHECK(csv_string(run_monte_carlo(spec, config)) == base);
  config.parallelism = 8;
  CHECK(csv_string(run_monte_carlo(spec, config)) == base);
  // and a re-run with identical config
  config.parallelism = 1;
  CHECK(csv_string(run_monte_carlo(spec, config)) == base);
}

TEST_CASE("directed and undirected ensembles use distinct seeds") {
  CHECK(replicate_seed(1, "star", true, 100, 0) != replicate_seed(1, "star", false, 100, 0));
  CHECK(replicate_seed(1, "star", true, 100, 0) != replicate_seed(2, "star", true, 100, 0));
  CHECK(replicate_seed(1, "star", true, 100, 0) != replicate_seed(1, "banded", true, 100, 0));
}

TEST_CASE("config validation") {
  ScenarioSpec spec = find_scenario("star");
  RunConfig config = small_config();
  config.mc = 0;
  CHECK_THROWS_AS(run_monte_carlo(spec, config), invalid_input);
  config = small_config();
  config.n_grid = {40, 40};
  CHECK_THROWS_AS(run_monte_carlo(spec, config), invalid_input);
  config = small_config();
  config.n_grid = {50, 40};
  CHECK_THROWS_AS(run_monte_carlo(spec, config), invalid_input);
  config = small_config();
  config.methods = {};
  CHECK_THROWS_AS(run_monte_carlo(spec, config), invalid_input);
}

TEST_CASE("aggregation means, sds and order invariance") {
  RunRecord base;
  base.scenario = "x";
  base.n = 100;
  base.method = Method::kmp;
  std::vector<RunRecord> records;
  for (int i = 0; i < 2; ++i) {
    RunRecord r = base;
    r.replicate = i;
    r.ari = double(i);  // {0, 1}
    r.accuracy = 1.0;
    r.exact = i == 1;
    r.elapsed_ms = 10 * (i + 1);
    records.push_back(r);
  }
  auto rows = aggregate(records);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_ari == doctest::Approx(0.5));
  CHECK(rows[0].sd_ari == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(rows[0].sd_ari == doctest::Approx(0.7071).epsilon(1e-3));
  CHECK(rows[0].exact_rate == doctest::Approx(0.5));
  CHECK(rows[0].mean_elapsed_ms == doctest::Approx(15.0));
  CHECK(rows[0].errors == 0);

  std::swap(records[0], records[1]);
  auto swapped = aggregate(records);
  CHECK(swapped[0].mean_ari == rows[0].mean_ari);
  CHECK(swapped[0].sd_ari == rows[0].sd_ari);

  // identical ARIs have zero sd
  records[0].ari = records[1].ari = 0.25;
  CHECK(aggregate(records)[0].sd_ari == 0.0);

  // NaN rows are skipped and counted
  RunRecord bad = base;
  bad.replicate = 2;
  bad.ari = std::numeric_limits<double>::quiet_NaN();
  bad.accuracy = std::numeric_limits<double>::quiet_NaN();
  records.push_back(bad);
  auto with_error = aggregate(records);
  REQUIRE(with_error.size() == 1);
  CHECK(with_error[0].errors == 1);
  CHECK(with_error[0].mean_ari == doctest::Approx(0.25));
}

TEST_CASE("csv format: header, digits, empty error fields, round trip") {
  std::vector<RunRecord> records;
  RunRecord r;
  r.scenario = "star";
  r.directed = false;
  r.n = 100;
  r.method = Method::dscore;
  r.replicate = 3;
  r.seed = 1234567890123456789ull;
  r.ari = 1.0 / 3.0;
  r.accuracy = 0.5;
  r.exact = false;
  r.elapsed_ms = 42;
  records.push_back(r);
  RunRecord bad = r;
  bad.replicate = 4;
  bad.ari = std::numeric_limits<double>::quiet_NaN();
  bad.accuracy = std::numeric_limits<double>::quiet_NaN();
  bad.exact = false;
  bad.elapsed_ms = 0;
  records.push_back(bad);

  std::ostringstream out;
  write_csv(records, out);
  const std::string expected =
      "scenario,directed,n,method,replicate,seed,ari,accuracy,exact,elapsed_ms\n"
      "star,0,100,DSCORE,3,1234567890123456789,0.333333,0.500000,0,42\n"
      "star,0,100,DSCORE,4,1234567890123456789,,,0,0\n";
  CHECK(out.str() == expected);

  std::istringstream in(out.str());
  auto back = read_records_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].scenario == "star");
  CHECK(back[0].ari == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(std::isnan(back[1].ari));
  CHECK(back[1].elapsed_ms == 0);

  // empty record list: header only
  std::ostringstream empty;
  write_csv({}, empty);
  CHECK(empty.str() == std::string(kRecordsCsvHeader) + "\n");

  std::istringstream bad_header("not,a,header\n");
  CHECK_THROWS_AS(read_records_csv(bad_header), invalid_input);
}

TEST_CASE("svg panels are well-formed xml with one polyline per method") {
  ScenarioSpec spec = find_scenario("diag_dominant");
  RunConfig config = small_config();
  config.n_grid = {30, 40};
  auto aggregates = aggregate(run_monte_carlo(spec, config));
  const std::string dir = std::filesystem::temp_directory_path() / "sdsbm_svg_test";
  std::filesystem::create_directories(dir);
  auto paths = emit_svg(aggregates, dir + "/");
  REQUIRE(paths.size() == 1);
  std::ifstream in(paths[0]);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string svg = buf.str();
  CHECK(oracle::xml_well_formed(svg));
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1)) {
    ++polylines;
  }
  CHECK(polylines == config.methods.size());
  CHECK(svg.find("KMP") != std::string::npos);
  CHECK(svg.find("diag_dominant (directed)") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("undirected runs flow through the same pipeline") {
  ScenarioSpec spec = find_scenario("diag_dominant");
  spec.directed = false;
  RunConfig config = small_config();
  config.methods = {Method::kmp};
  auto records = run_monte_carlo(spec, config);
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) {
    CHECK_FALSE(rec.directed);
    CHECK_FALSE(std::isnan(rec.ari));
  }
}
