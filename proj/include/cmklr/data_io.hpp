#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cmklr/kernels.hpp"
#include "cmklr/metrics.hpp"

namespace cmklr {

/// Dense numeric CSV: comma separated, no header. Throws on missing files,
/// ragged rows, unparsable or non-finite cells.
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

/// Writes every entry in shortest round-trip decimal form.
void write_csv_matrix(const Eigen::MatrixXd& M, const std::filesystem::path& path);

/// Feature CSV with at least two samples.
Eigen::MatrixXd load_feature_matrix(const std::filesystem::path& path);

struct LabelVector {
  std::vector<int> codes;           ///< contiguous 0..classes-1, first-appearance order
  std::vector<long long> original;  ///< original value of each code
  int classes() const { return static_cast<int>(original.size()); }
};

LabelVector load_labels(const std::filesystem::path& path);

struct ManifestEntry {
  std::string file;  ///< relative to the manifest's directory unless absolute
  KernelKind kind = KernelKind::gaussian;
  KernelParams params;
};

struct KernelBankManifest {
  Eigen::Index n = 0;
  std::vector<ManifestEntry> entries;
};

struct LoadedBank {
  KernelBank kernels;
  KernelBankManifest manifest;
};

/// Loads kernels in manifest order. Each matrix must be n x n and symmetric
/// within `symmetry_tol` (absolute); it is then replaced by (K + K') / 2.
LoadedBank load_kernel_bank(const std::filesystem::path& manifest_path,
                            double symmetry_tol = 1e-8);

/// Writes kernel_XX.csv files next to the manifest and the manifest itself.
KernelBankManifest save_kernel_bank(const KernelBank& bank,
                                    const std::filesystem::path& manifest_path);

struct ResultDocument {
  std::vector<int> assignments;
  std::vector<double> weights;
  std::vector<double> objective_trace;
  int iterations = 0;
  int tau = 0;
  int num_clusters = 0;
  std::string method = "cmklr";
  std::optional<int> kernel_index;
  std::optional<Metrics> metrics;
};

void save_result(const ResultDocument& result, const std::filesystem::path& path);
ResultDocument load_result(const std::filesystem::path& path);

/// Two-column CSV "iteration,objective" with a header line, iterations from 1.
void write_trace_csv(const std::vector<double>& trace, const std::filesystem::path& path);

/// Reads cluster labels from a result document (.json) or a file holding one
/// integer per line.
std::vector<int> load_assignments(const std::filesystem::path& path);

}  // namespace cmklr
