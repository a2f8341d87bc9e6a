#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <filesystem>
#include <span>
#include <vector>

#include "cmklr/kernels.hpp"

namespace cmklr {

/// Sparse row-stochastic local-regression coefficients. Row i holds the
/// Nadaraya-Watson weights of sample i's kernel neighborhood.
using CoefficientMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// The tau kernel-nearest neighbors of every sample, ordered by descending
/// similarity with ties broken by ascending index. Self is never a neighbor.
class NeighborIndex {
 public:
  NeighborIndex(Eigen::Index samples, Eigen::Index tau);

  Eigen::Index samples() const { return samples_; }
  Eigen::Index tau() const { return tau_; }

  std::span<const Eigen::Index> of(Eigen::Index i) const {
    return {flat_.data() + i * tau_, static_cast<std::size_t>(tau_)};
  }
  std::span<Eigen::Index> of(Eigen::Index i) {
    return {flat_.data() + i * tau_, static_cast<std::size_t>(tau_)};
  }

 private:
  Eigen::Index samples_;
  Eigen::Index tau_;
  std::vector<Eigen::Index> flat_;
};

NeighborIndex select_neighbors(const Eigen::MatrixXd& K, Eigen::Index tau);
inline NeighborIndex select_neighbors(const KernelMatrix& K, Eigen::Index tau) {
  return select_neighbors(K.values, tau);
}

/// Row i gets max(K_ij, 0) / sum_s max(K_is, 0) on its neighbors, or 1/tau on
/// each neighbor when that sum vanishes.
CoefficientMatrix build_coefficients(const Eigen::MatrixXd& K, Eigen::Index tau);
inline CoefficientMatrix build_coefficients(const KernelMatrix& K, Eigen::Index tau) {
  return build_coefficients(K.values, tau);
}

std::vector<CoefficientMatrix> build_coefficients(const KernelBank& bank, Eigen::Index tau);

/// Convex combination sum_r w_r A_r. `w` must lie on the simplex within 1e-8;
/// it is renormalized to unit sum before combining.
CoefficientMatrix fuse(std::span<const CoefficientMatrix> coeffs, const Eigen::VectorXd& w);

/// Throws unless A is square, entrywise nonnegative and every row sums to 1
/// within `tol`.
void check_row_stochastic(const CoefficientMatrix& A, double tol = 1e-8);

/// Writes "i,j,weight" lines, one per stored entry, rows ascending.
void write_coefficients_csv(const CoefficientMatrix& A, const std::filesystem::path& path);

}  // namespace cmklr
