// cmklr: multiple kernel clustering via local regression integration.
//
//   cmklr kernels  --features X.csv | --view V1.csv --view V2.csv ... --out bank.json [--zscore]
//   cmklr cluster  --manifest bank.json --clusters C --out result.json [--trace] ...
//   cmklr evaluate --result result.json --labels y.txt
//   cmklr grid     --manifest bank.json --labels y.txt [--taus 3,5,7,9,11,13,15]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmklr/data_io.hpp"
#include "cmklr/error.hpp"
#include "cmklr/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cmklr;

namespace {

void add_run_options(CLI::App& cmd, RunConfig& cfg, std::string& init) {
  cmd.add_option("--tau", cfg.tau, "Neighborhood size")->capture_default_str();
  cmd.add_option("--max-iter", cfg.max_iter, "Maximum alternating iterations")
      ->capture_default_str();
  cmd.add_option("--tol", cfg.tol, "Relative objective decrease for convergence")
      ->capture_default_str();
  cmd.add_option("--kmeans-restarts", cfg.kmeans_restarts, "K-means restarts")
      ->capture_default_str();
  cmd.add_option("--kmeans-init", init, "K-means initialization: random or plusplus")
      ->check(CLI::IsMember({"random", "plusplus"}))
      ->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Seed for k-means initialization")->capture_default_str();
}

KMeansInit parse_init(const std::string& s) {
  return s == "plusplus" ? KMeansInit::plus_plus : KMeansInit::random_rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple kernel clustering via local regression integration"};
  app.require_subcommand(1);

  // kernels
  std::string features;
  std::vector<std::string> views;
  std::string bank_out;
  bool zscore = false;
  auto* kernels = app.add_subcommand("kernels", "Build a candidate kernel bank");
  auto* features_opt = kernels->add_option("--features", features, "Single-view feature CSV");
  auto* view_opt = kernels->add_option("--view", views, "Feature CSV of one view (repeatable)");
  features_opt->excludes(view_opt);
  kernels->add_option("--out", bank_out, "Manifest path to write")->required();
  kernels->add_flag("--zscore", zscore, "Standardize every feature before building kernels");

  // cluster
  RunConfig cfg;
  std::string init = "random";
  std::string manifest;
  std::string result_out;
  std::string method_name = "cmklr";
  std::optional<int> kernel_index;
  bool trace = false;
  std::string trace_out;
  double symmetry_tol = 1e-8;
  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a kernel bank");
  cluster_cmd->add_option("--manifest", manifest, "Kernel bank manifest")->required();
  cluster_cmd->add_option("--clusters", cfg.clusters, "Number of clusters")->required();
  cluster_cmd->add_option("--out", result_out, "Result document to write")->required();
  cluster_cmd->add_option("--method", method_name, "cmklr or cklr")
      ->check(CLI::IsMember({"cmklr", "cklr"}))
      ->capture_default_str();
  cluster_cmd->add_option("--kernel-index", kernel_index, "1-based kernel used by cklr");
  cluster_cmd->add_flag("--trace", trace, "Also write the per-iteration objective as CSV");
  cluster_cmd->add_option("--trace-out", trace_out, "Trace CSV path (implies --trace)");
  cluster_cmd->add_option("--symmetry-tol", symmetry_tol, "Kernel asymmetry tolerance")
      ->capture_default_str();
  add_run_options(*cluster_cmd, cfg, init);

  // evaluate
  std::string result_in;
  std::string labels_path;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score an assignment against labels");
  evaluate_cmd->add_option("--result", result_in, "Result document or one-label-per-line file")
      ->required();
  evaluate_cmd->add_option("--labels", labels_path, "Ground-truth labels")->required();

  // grid
  std::vector<int> taus = kDefaultTauGrid;
  std::string table_out;
  auto* grid_cmd = app.add_subcommand("grid", "Grid search over tau with evaluation");
  grid_cmd->add_option("--manifest", manifest, "Kernel bank manifest")->required();
  grid_cmd->add_option("--labels", labels_path, "Ground-truth labels")->required();
  grid_cmd->add_option("--taus", taus, "Tau values")->delimiter(',')->capture_default_str();
  grid_cmd->add_option("--clusters", cfg.clusters,
                       "Number of clusters (default: number of label classes)");
  grid_cmd->add_option("--out", table_out, "Also write the table to this file");
  grid_cmd->add_option("--symmetry-tol", symmetry_tol, "Kernel asymmetry tolerance")
      ->capture_default_str();
  add_run_options(*grid_cmd, cfg, init);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.kmeans_init = parse_init(init);

    if (kernels->parsed()) {
      std::vector<Eigen::MatrixXd> inputs;
      if (!features.empty()) {
        inputs.push_back(load_feature_matrix(features));
      } else {
        for (const auto& v : views) inputs.push_back(load_feature_matrix(v));
      }
      if (inputs.empty()) throw Error("give --features or at least one --view");
      const KernelBank bank = build_bank(inputs, zscore);
      save_kernel_bank(bank, bank_out);
      std::cout << "wrote " << bank.size() << " kernels (n=" << bank.front().size() << ") to "
                << bank_out << '\n';
      return EXIT_SUCCESS;
    }

    if (cluster_cmd->parsed()) {
      const Method method = parse_method(method_name);
      if (method == Method::cmklr && kernel_index)
        throw Error("--kernel-index only applies to --method cklr");
      const LoadedBank bank = load_kernel_bank(manifest, symmetry_tol);
      const ClusterOutcome outcome = cluster(bank.kernels, cfg, method, kernel_index);
      save_result(make_result_document(outcome, method, kernel_index), result_out);
      if (trace || !trace_out.empty()) {
        fs::path path = trace_out.empty() ? fs::path(result_out).replace_extension(".trace.csv")
                                          : fs::path(trace_out);
        write_trace_csv(outcome.solver.objective_trace, path);
      }
      std::cout << "iterations " << outcome.solver.iterations << ", objective "
                << outcome.solver.objective_trace.back() << ", k-means inertia "
                << outcome.assignment.inertia << '\n';
      return EXIT_SUCCESS;
    }

    if (evaluate_cmd->parsed()) {
      const std::vector<int> pred = load_assignments(result_in);
      const LabelVector truth = load_labels(labels_path);
      const Metrics metrics = evaluate(pred, truth.codes);
      std::cout << format_metrics(metrics) << '\n';
      if (fs::path(result_in).extension() == ".json") {
        ResultDocument doc = load_result(result_in);
        doc.metrics = metrics;
        save_result(doc, result_in);
      }
      return EXIT_SUCCESS;
    }

    if (grid_cmd->parsed()) {
      const LoadedBank bank = load_kernel_bank(manifest, symmetry_tol);
      const LabelVector truth = load_labels(labels_path);
      if (cfg.clusters == 0) cfg.clusters = truth.classes();
      const std::string table = format_grid(grid_search(bank.kernels, truth.codes, taus, cfg));
      std::cout << table;
      if (!table_out.empty()) {
        std::ofstream out(table_out);
        if (!(out << table)) throw Error("failed writing '" + table_out + "'");
      }
      return EXIT_SUCCESS;
    }
  } catch (const std::exception& e) {
    std::cerr << "cmklr: error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
