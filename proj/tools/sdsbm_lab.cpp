// sdsbm-lab: simulation and estimation driver for the SDSBM toolkit.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sdsbm/baselines.hpp"
#include "sdsbm/estimator.hpp"
#include "sdsbm/harness.hpp"
#include "sdsbm/theory_bounds.hpp"

namespace {

using namespace sdsbm;

std::vector<ScenarioSpec> resolve_scenarios(const std::string& name) {
  if (name == "all") {
    return scenario_registry();
  }
  return {find_scenario(name)};
}

std::vector<bool> resolve_directedness(const std::string& mode) {
  if (mode == "true") return {true};
  if (mode == "false") return {false};
  if (mode == "both") return {true, false};
  throw invalid_input("--directed must be true, false or both");
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    methods.push_back(method_from_name(name));
  }
  return methods;
}

void write_manifest(const std::string& path, const RunConfig& config,
                    const std::string& scenarios, const std::string& directed) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "scenarios=" << scenarios << '\n';
  out << "directed=" << directed << '\n';
  out << "n=";
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    out << (i ? "," : "") << config.n_grid[i];
  }
  out << '\n';
  out << "mc=" << config.mc << '\n';
  out << "methods=";
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    out << (i ? "," : "") << method_name(config.methods[i]);
  }
  out << '\n';
  out << "seed=" << config.master_seed << '\n';
  out << "h_const=" << config.h_constant << '\n';
  out << "kmeans_restarts=" << config.kmeans.restarts << '\n';
  out << "kmeans_max_iters=" << config.kmeans.max_iters << '\n';
  out << "kmeans_tolerance=" << config.kmeans.tolerance << '\n';
  out << "kmeans_seeding="
      << (config.kmeans.seeding == KMeansSeeding::plus_plus ? "plus-plus" : "random")
      << '\n';
  out << "jobs=" << config.parallelism << '\n';
  out << "timing=" << (config.measure_time ? 1 : 0) << '\n';
  out << "svd_tol=1e-10\n";
  out << "svd_max_iters=500\n";
  out << "dscore_ratio_base=leading_singular_vectors\n";
  out << "dscore_clip=log_n\n";
}

int cmd_run(const std::string& scenario_name, const std::string& directed_mode,
            RunConfig config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<RunRecord> all_records;
  for (const auto& base_spec : resolve_scenarios(scenario_name)) {
    for (bool directed : resolve_directedness(directed_mode)) {
      ScenarioSpec spec = base_spec;
      spec.directed = directed;
      std::cerr << "running " << spec.name << " (" << (directed ? "directed" : "undirected")
                << ")...\n";
      auto records = run_monte_carlo(spec, config);
      all_records.insert(all_records.end(), records.begin(), records.end());
    }
  }
  const std::string csv_path = out_dir + "/records.csv";
  write_csv_file(all_records, csv_path);
  write_manifest(out_dir + "/run_manifest.txt", config, scenario_name, directed_mode);
  int failures = 0;
  for (const auto& rec : all_records) {
    if (std::isnan(rec.ari)) {
      ++failures;
    }
  }
  std::cout << "wrote " << all_records.size() << " records to " << csv_path;
  if (failures > 0) {
    std::cout << " (" << failures << " method failures)";
  }
  std::cout << '\n';
  return failures > 0 ? 3 : 0;
}

int cmd_estimate(const std::string& edges_path, double h, bool h_given,
                 double h_constant, const std::string& out_path) {
  std::ifstream in(edges_path);
  if (!in) {
    throw invalid_input("cannot open edge list: " + edges_path);
  }
  AdjacencyMatrix a = read_edge_list(in);
  std::optional<double> bandwidth;
  if (h_given) {
    bandwidth = h;
  }
  EstimatedMatrix p_tilde = estimate(a, bandwidth, h_constant);
  std::ofstream out(out_path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + out_path);
  }
  write_matrix_csv(p_tilde.values, out);
  std::cout << "wrote " << a.n() << "x" << a.n() << " estimate to " << out_path << '\n';
  return 0;
}

int cmd_check_assumptions(const std::string& scenario_name, int n, double c_1,
                          double c_h, const std::vector<int>& n_grid) {
  ScenarioSpec spec = find_scenario(scenario_name);
  auto report_at = [&](int nn) {
    const BlockMatrix block = spec.block_for(nn);
    const CommunityProbs rho = spec.rho_for(nn);
    EpsilonSet eps = default_epsilons(nn, rho.rho_min(), c_h);
    eps.c_1 = c_1;
    return check_assumptions(nn, spec.k_for(nn), rho.values(), spec.gamma_for(nn),
                             block_row_separation(block), eps);
  };

  const AssumptionsReport rep = report_at(n);
  std::printf("scenario %s at n=%d (K=%d, gamma=%.6f, C_1=%g, C_h=%g)\n",
              spec.name.c_str(), n, spec.k_for(n), spec.gamma_for(n), c_1, c_h);
  std::printf("%-38s %-6s %s\n", "assumption", "pass", "slack");
  auto line = [](const char* name, const AssumptionCheck& c) {
    std::printf("%-38s %-6s %+.6g\n", name, c.pass ? "yes" : "no", c.slack);
  };
  line("1 community proportions", rep.proportions);
  std::printf("    rho floor slack %+.6g, eps window %+.6g, margin %+.6g, K-decay %.6g\n",
              rep.rho_floor_slack, rep.eps_window_slack, rep.concentration_margin,
              rep.k_decay);
  line("2 community-size concentration", rep.size_concentration);
  line("3 separation vs estimation error", rep.separation_vs_error);

  if (!n_grid.empty()) {
    std::printf("\ntrend over n grid (slacks should grow for the omega(1) conditions)\n");
    std::printf("%-10s %-12s %-12s %-12s\n", "n", "margin_1", "slack_2", "slack_3");
    for (int nn : n_grid) {
      const AssumptionsReport r = report_at(nn);
      std::printf("%-10d %-12.6g %-12.6g %-12.6g\n", nn, r.concentration_margin,
                  r.size_concentration.slack, r.separation_vs_error.slack);
    }
  }
  return 0;
}

int cmd_plot(const std::string& in_path, const std::string& out_dir) {
  auto records = read_records_csv_file(in_path);
  auto aggregates = aggregate(records);
  std::filesystem::create_directories(out_dir);
  auto paths = emit_svg(aggregates, out_dir + "/");
  for (const auto& p : paths) {
    std::cout << "wrote " << p << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sdsbm-lab: community detection on sparse directed block models"};
  app.require_subcommand(1);
  // `--h` is a real option of `estimate`, so help stays on --help only
  app.set_help_flag("--help", "print usage");
  app.set_config("--config")->description("key=value file; command-line flags win");

  // run
  auto* run = app.add_subcommand("run", "Monte-Carlo sweep writing records.csv");
  run->fallthrough();
  std::string scenario = "all";
  std::string directed = "both";
  RunConfig config;
  config.parallelism = int(std::thread::hardware_concurrency());
  if (config.parallelism < 1) {
    config.parallelism = 1;
  }
  std::vector<std::string> method_names = {"KMA", "KMP", "SPECTRAL", "DSCORE"};
  std::string out_dir;
  bool timing = true;
  run->add_option("--scenario", scenario,
                  "star|banded|diag_dominant|sparse_two_block|growing_k|all");
  run->add_option("--directed", directed, "true|false|both");
  run->add_option("--n", config.n_grid, "node counts (strictly increasing)")
      ->delimiter(',');
  run->add_option("--mc", config.mc, "replicates per (scenario, n)");
  run->add_option("--methods", method_names, "subset of KMA,KMP,SPECTRAL,DSCORE")
      ->delimiter(',');
  run->add_option("--seed", config.master_seed, "master seed");
  run->add_option("--h-const", config.h_constant, "C_h in h = C_h sqrt(log n / n)");
  run->add_option("--restarts", config.kmeans.restarts, "k-means restarts");
  run->add_option("--jobs", config.parallelism, "worker threads");
  run->add_flag("--timing,!--no-timing", timing,
                "record wall time per method (off for byte-stable output)");
  run->add_option("--out", out_dir, "output directory")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "smooth one edge-list graph");
  est->set_help_flag("--help", "print usage");
  est->fallthrough();
  std::string edges_path, est_out;
  double h = 0.0;
  double h_const_est = 1.0;
  auto* h_opt = est->add_option("--h", h, "bandwidth in (0,1); default C_h sqrt(log n/n)");
  est->add_option("--h-const", h_const_est, "C_h used when --h is absent");
  est->add_option("--edges", edges_path, "edge list file")->required();
  est->add_option("--out", est_out, "output CSV path")->required();

  // check-assumptions
  auto* chk = app.add_subcommand("check-assumptions", "evaluate the three assumptions");
  chk->fallthrough();
  std::string chk_scenario;
  int chk_n = 0;
  double c_1 = 1.0;
  double c_h = 1.0;
  std::vector<int> chk_grid;
  chk->add_option("--scenario", chk_scenario, "scenario name")->required();
  chk->add_option("--n", chk_n, "node count")->required();
  chk->add_option("--c1", c_1, "constant C_1 in the separation condition");
  chk->add_option("--ch", c_h, "bandwidth constant C_h");
  chk->add_option("--n-grid", chk_grid, "optional n grid for a trend table")
      ->delimiter(',');

  // plot
  auto* plot = app.add_subcommand("plot", "render SVG panels from records.csv");
  plot->fallthrough();
  std::string plot_in, plot_out;
  plot->add_option("--in", plot_in, "records.csv path")->required();
  plot->add_option("--out", plot_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      config.methods = resolve_methods(method_names);
      config.measure_time = timing;
      return cmd_run(scenario, directed, config, out_dir);
    }
    if (*est) {
      return cmd_estimate(edges_path, h, h_opt->count() > 0, h_const_est, est_out);
    }
    if (*chk) {
      return cmd_check_assumptions(chk_scenario, chk_n, c_1, c_h, chk_grid);
    }
    if (*plot) {
      return cmd_plot(plot_in, plot_out);
    }
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
