#include "cmklr/simplex_qp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cmklr/error.hpp"

namespace cmklr {

Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size();
  if (m == 0) throw Error("cannot project an empty vector onto the simplex");
  std::vector<double> sorted(v.data(), v.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  Eigen::VectorXd w = (v.array() - theta).cwiseMax(0.0);
  const double s = w.sum();
  if (s > 0.0) w /= s;
  return w;
}

namespace {

// Minimizer of the quadratic restricted to {w_S : sum = 1, w_rest = 0}.
std::optional<Eigen::VectorXd> kkt_on_support(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                                              const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs(k + 1);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = P(support[a], support[b]);
    kkt(a, k) = kkt(k, a) = 1.0;
    rhs(a) = q(support[a]);
  }
  rhs(k) = 1.0;
  const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  if ((kkt * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return std::nullopt;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(P.rows());
  for (Eigen::Index a = 0; a < k; ++a) {
    if (sol(a) < 0.0) return std::nullopt;
    w(support[a]) = sol(a);
  }
  return w / w.sum();
}

}  // namespace

Eigen::VectorXd solve_simplex_qp(const QpProblem& problem,
                                 const std::optional<Eigen::VectorXd>& start,
                                 const SimplexQpOptions& options) {
  const Eigen::Index m = problem.size();
  if (m < 1) throw Error("empty quadratic program");
  if (problem.gram.rows() != m || problem.gram.cols() != m)
    throw Error("quadratic program dimensions disagree");
  if (!problem.gram.allFinite() || !problem.linear.allFinite())
    throw Error("quadratic program contains non-finite values");
  if (m == 1) return Eigen::VectorXd::Ones(1);

  const Eigen::MatrixXd P =
      0.5 * (problem.gram + problem.gram.transpose()) +
      options.ridge * Eigen::MatrixXd::Identity(m, m);
  const Eigen::VectorXd& q = problem.linear;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error("eigen-decomposition of the QP matrix failed");
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (lmin < -1e-9 * std::max(1.0, std::abs(lmax)))
    throw Error("QP matrix is not positive semidefinite (min eigenvalue " + std::to_string(lmin) +
                ")");

  const QpProblem ridged{P, q};
  Eigen::VectorXd w = start ? project_onto_simplex(*start)
                            : Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  if (w.size() != m) throw Error("warm start has the wrong dimension");

  const double step = 1.0 / lmax;
  for (int it = 0; it < options.max_iter; ++it) {
    const Eigen::VectorXd next = project_onto_simplex(w - step * (P * w - q));
    const double mapping_norm = (next - w).norm() * lmax;
    w = next;
    if (mapping_norm <= options.gradient_tol) break;
  }

  std::vector<Eigen::Index> support;
  for (Eigen::Index r = 0; r < m; ++r)
    if (w(r) > 1e-12) support.push_back(r);
  if (auto polished = kkt_on_support(P, q, support)) {
    if (ridged.value(*polished) <= ridged.value(w)) w = *polished;
  }
  return w;
}

}  // namespace cmklr
