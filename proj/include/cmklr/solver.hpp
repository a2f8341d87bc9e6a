#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "cmklr/kernels.hpp"
#include "cmklr/local_regression.hpp"
#include "cmklr/simplex_qp.hpp"

namespace cmklr {

/// L = (I - A)'(I - A) assembled densely and symmetrized. A must be
/// row-stochastic.
Eigen::MatrixXd build_laplacian(const CoefficientMatrix& A);

struct EigenPairs {
  Eigen::VectorXd values;   ///< ascending
  Eigen::MatrixXd vectors;  ///< orthonormal columns matching `values`
};

/// Eigenvectors of the c algebraically smallest eigenvalues of a symmetric L.
/// Each column is signed so that its largest-magnitude entry (lowest index on
/// ties) is nonnegative.
EigenPairs smallest_eigenvectors(const Eigen::MatrixXd& L, Eigen::Index c);

/// ||Y - A Y||_F^2 for a row-stochastic A.
double objective(const Eigen::MatrixXd& Y, const CoefficientMatrix& A);

/// P_ij = <A_i Y, A_j Y>_F and q_i = tr(Y' A_i Y).
QpProblem build_qp(std::span<const CoefficientMatrix> coeffs, const Eigen::MatrixXd& Y);

struct SolverOptions {
  int max_iter = 50;
  double tol = 1e-5;
};

struct SolverResult {
  Eigen::MatrixXd embedding;
  Eigen::VectorXd weights;
  std::vector<double> objective_trace;  ///< f_t, recorded after each weight update
  std::vector<double> eigen_step_trace;  ///< objective right after each embedding update
  int iterations = 0;
  int tau = 0;
  int num_clusters = 0;
};

/// Alternates the spectral embedding step and the simplex-constrained weight
/// step from uniform weights until the relative decrease of the objective
/// drops to `tol`, the objective hits zero, or `max_iter` is reached.
SolverResult run_cmklr(std::span<const CoefficientMatrix> coeffs, int tau, int c,
                       const SolverOptions& options = {});
SolverResult run_cmklr(const KernelBank& bank, int tau, int c, const SolverOptions& options = {});

/// Single-kernel variant: one coefficient matrix, one eigen step.
SolverResult run_cklr(const KernelMatrix& K, int tau, int c);

}  // namespace cmklr
