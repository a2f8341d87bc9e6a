#pragma once

#include <Eigen/Dense>

#include <optional>

namespace cmklr {

/// min_w  w'Pw - 2 w'q  subject to w >= 0, sum(w) = 1.
struct QpProblem {
  Eigen::MatrixXd gram;    ///< P, symmetric positive semidefinite
  Eigen::VectorXd linear;  ///< q

  Eigen::Index size() const { return linear.size(); }
  double value(const Eigen::VectorXd& w) const { return w.dot(gram * w) - 2.0 * w.dot(linear); }
};

struct SimplexQpOptions {
  double ridge = 1e-12;
  double gradient_tol = 1e-10;
  int max_iter = 10000;
};

/// Euclidean projection onto the probability simplex (sort-based, exact).
Eigen::VectorXd project_onto_simplex(const Eigen::VectorXd& v);

/// Projected gradient with step 1/||P||_2 from `start` (uniform weights when
/// absent), finished by an exact solve of the KKT system on the active support
/// whenever that stays feasible and does not increase the objective.
Eigen::VectorXd solve_simplex_qp(const QpProblem& problem,
                                 const std::optional<Eigen::VectorXd>& start = std::nullopt,
                                 const SimplexQpOptions& options = {});

}  // namespace cmklr
