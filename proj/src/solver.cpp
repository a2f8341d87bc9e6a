#include "cmklr/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <cmath>
#include <string>

#include "cmklr/error.hpp"

namespace cmklr {

Eigen::MatrixXd build_laplacian(const CoefficientMatrix& A) {
  check_row_stochastic(A);
  const Eigen::Index n = A.rows();
  CoefficientMatrix identity(n, n);
  identity.setIdentity();
  const CoefficientMatrix residual = identity - A;
  const Eigen::SparseMatrix<double> gram = residual.transpose() * residual;
  Eigen::MatrixXd L = Eigen::MatrixXd(gram);
  L = 0.5 * (L + L.transpose()).eval();
  return L;
}

EigenPairs smallest_eigenvectors(const Eigen::MatrixXd& L, Eigen::Index c) {
  const Eigen::Index n = L.rows();
  if (L.cols() != n) throw Error("Laplacian is not square");
  if (c < 1 || c >= n)
    throw Error("number of eigenvectors c=" + std::to_string(c) + " out of range [1, " +
                std::to_string(n - 1) + "]");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(L);
  if (eig.info() != Eigen::Success) throw Error("symmetric eigensolver failed");

  EigenPairs out{eig.eigenvalues().head(c), eig.eigenvectors().leftCols(c)};
  for (Eigen::Index k = 0; k < c; ++k) {
    auto v = out.vectors.col(k);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0.0) v = -v;
  }
  return out;
}

double objective(const Eigen::MatrixXd& Y, const CoefficientMatrix& A) {
  check_row_stochastic(A);
  if (A.cols() != Y.rows()) throw Error("embedding and coefficient matrix sizes disagree");
  return (Y - A * Y).squaredNorm();
}

QpProblem build_qp(std::span<const CoefficientMatrix> coeffs, const Eigen::MatrixXd& Y) {
  const auto m = static_cast<Eigen::Index>(coeffs.size());
  if (m == 0) throw Error("no coefficient matrices");
  const Eigen::Index n = Y.rows();
  const Eigen::Index c = Y.cols();

  // Column r holds vec(A_r Y).
  Eigen::MatrixXd stacked(n * c, m);
  Eigen::VectorXd q(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& A = coeffs[static_cast<std::size_t>(r)];
    if (A.rows() != n || A.cols() != n) throw Error("coefficient matrix does not match embedding");
    const Eigen::MatrixXd AY = A * Y;
    stacked.col(r) = Eigen::Map<const Eigen::VectorXd>(AY.data(), n * c);
    q(r) = Y.cwiseProduct(AY).sum();
  }
  Eigen::MatrixXd P = stacked.transpose() * stacked;
  P = 0.5 * (P + P.transpose()).eval();
  return {std::move(P), std::move(q)};
}

namespace {

void check_problem(Eigen::Index n, int tau, int c) {
  if (tau < 1 || tau > n - 1)
    throw Error("tau=" + std::to_string(tau) + " out of range [1, " + std::to_string(n - 1) + "]");
  if (c < 2 || c >= n)
    throw Error("cluster count c=" + std::to_string(c) + " out of range [2, " +
                std::to_string(n - 1) + "]");
}

}  // namespace

SolverResult run_cmklr(std::span<const CoefficientMatrix> coeffs, int tau, int c,
                       const SolverOptions& options) {
  if (coeffs.empty()) throw Error("kernel bank is empty");
  const Eigen::Index n = coeffs.front().rows();
  check_problem(n, tau, c);
  if (options.max_iter < 1) throw Error("max_iter must be at least 1");
  if (!(options.tol > 0.0)) throw Error("tolerance must be positive");

  const auto m = static_cast<Eigen::Index>(coeffs.size());
  SolverResult result;
  result.tau = tau;
  result.num_clusters = c;
  result.weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));

  CoefficientMatrix fused = fuse(coeffs, result.weights);
  for (int t = 1; t <= options.max_iter; ++t) {
    const Eigen::MatrixXd L = build_laplacian(fused);
    result.embedding = smallest_eigenvectors(L, c).vectors;
    result.eigen_step_trace.push_back(objective(result.embedding, fused));

    const QpProblem qp = build_qp(coeffs, result.embedding);
    result.weights = solve_simplex_qp(qp, result.weights);
    fused = fuse(coeffs, result.weights);

    const double f = objective(result.embedding, fused);
    result.objective_trace.push_back(f);
    result.iterations = t;

    if (t > 1) {
      const double prev = result.objective_trace[result.objective_trace.size() - 2];
      if (prev == 0.0) break;
      if ((prev - f) / prev <= options.tol) break;
    }
  }
  return result;
}

SolverResult run_cmklr(const KernelBank& bank, int tau, int c, const SolverOptions& options) {
  const std::vector<CoefficientMatrix> coeffs = build_coefficients(bank, tau);
  return run_cmklr(coeffs, tau, c, options);
}

SolverResult run_cklr(const KernelMatrix& K, int tau, int c) {
  check_problem(K.size(), tau, c);
  const CoefficientMatrix A = build_coefficients(K, tau);
  SolverResult result;
  result.tau = tau;
  result.num_clusters = c;
  result.weights = Eigen::VectorXd::Ones(1);
  result.embedding = smallest_eigenvectors(build_laplacian(A), c).vectors;
  const double f = objective(result.embedding, A);
  result.objective_trace.push_back(f);
  result.eigen_step_trace.push_back(f);
  result.iterations = 1;
  return result;
}

}  // namespace cmklr
