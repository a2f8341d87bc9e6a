#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmklr/data_io.hpp"
#include "cmklr/discretize.hpp"
#include "cmklr/kernels.hpp"
#include "cmklr/metrics.hpp"
#include "cmklr/solver.hpp"

namespace cmklr {

enum class Method { cmklr, cklr };

std::string to_string(Method method);
Method parse_method(const std::string& text);

struct RunConfig {
  int tau = 7;
  int clusters = 0;
  int max_iter = 50;
  double tol = 1e-5;
  int kmeans_restarts = 20;
  std::uint64_t seed = 0;
  bool zscore = false;
  KMeansInit kmeans_init = KMeansInit::random_rows;

  void validate() const;
};

/// The tau values searched by `grid` when none are given.
inline const std::vector<int> kDefaultTauGrid = {3, 5, 7, 9, 11, 13, 15};

/// Builds the 12-kernel bank for one feature matrix, or the two-per-view bank
/// when several views are given.
KernelBank build_bank(const std::vector<Eigen::MatrixXd>& views, bool zscore);

struct ClusterOutcome {
  SolverResult solver;
  Assignment assignment;
};

/// Solver followed by row normalization and k-means. `kernel_index` is
/// 1-based and only used by the single-kernel method.
ClusterOutcome cluster(const KernelBank& bank, const RunConfig& config, Method method,
                       std::optional<int> kernel_index = std::nullopt);

ResultDocument make_result_document(const ClusterOutcome& outcome, Method method,
                                    std::optional<int> kernel_index);

struct GridRow {
  int tau = 0;
  Metrics metrics;
};

struct GridReport {
  std::vector<GridRow> rows;
  std::size_t best_acc = 0;
  std::size_t best_nmi = 0;
  std::size_t best_purity = 0;
};

/// Runs cmklr + evaluation for every tau; ties for a best row go to the
/// earliest tau.
GridReport grid_search(const KernelBank& bank, std::span<const int> truth,
                       const std::vector<int>& taus, const RunConfig& config);

/// Fixed-format text table, byte-identical for identical reports.
std::string format_grid(const GridReport& report);

/// {"acc":..,"nmi":..,"purity":..} on one line.
std::string format_metrics(const Metrics& metrics);

}  // namespace cmklr
