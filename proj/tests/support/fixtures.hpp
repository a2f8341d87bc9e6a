#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "cmklr/local_regression.hpp"

namespace cmklr::testing {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(CMKLR_TEST_TMPDIR) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

struct Blobs {
  Eigen::MatrixXd X;
  std::vector<int> labels;
};

/// Three isotropic Gaussian blobs with unit standard deviation whose centers
/// form an equilateral triangle of side `separation` in the first two
/// coordinates.
inline Blobs three_blobs(int per_cluster, int dims, double separation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(3, dims);
  centers(1, 0) = separation;
  centers(2, 0) = 0.5 * separation;
  centers(2, 1) = separation * std::sqrt(3.0) / 2.0;

  Blobs b;
  b.X.resize(3 * per_cluster, dims);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < per_cluster; ++i) {
      const int row = k * per_cluster + i;
      for (int d = 0; d < dims; ++d) b.X(row, d) = centers(k, d) + noise(rng);
      b.labels.push_back(k);
    }
  return b;
}

/// Random sparse row-stochastic matrix with `per_row` distinct off-diagonal
/// positive entries per row.
inline CoefficientMatrix random_row_stochastic(int n, int per_row, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<int> others(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    std::iota(others.begin(), others.end(), 0);
    for (auto& o : others)
      if (o >= i) ++o;
    std::shuffle(others.begin(), others.end(), rng);
    std::vector<double> w(static_cast<std::size_t>(per_row));
    for (auto& x : w) x = unit(rng);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (int k = 0; k < per_row; ++k)
      trips.emplace_back(i, others[static_cast<std::size_t>(k)], w[static_cast<std::size_t>(k)] / s);
  }
  CoefficientMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

inline Eigen::MatrixXd random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = g(rng);
  return M;
}

/// Orthonormal n x c matrix from the thin QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal(Eigen::Index n, Eigen::Index c, std::mt19937_64& rng) {
  const Eigen::MatrixXd G = random_gaussian(n, c, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, c);
}

inline Eigen::VectorXd random_simplex_point(Eigen::Index m, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(m);
  for (Eigen::Index r = 0; r < m; ++r) w(r) = e(rng);
  return w / w.sum();
}

/// Projector Y Y' onto the column span, for comparing embeddings up to basis.
inline Eigen::MatrixXd projector(const Eigen::MatrixXd& Y) { return Y * Y.transpose(); }

/// Minimum of w'Pw - 2w'q over the simplex grid with spacing 1/steps (m = 2 or 3).
inline double simplex_grid_minimum(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, int steps) {
  auto value = [&](const Eigen::VectorXd& w) { return w.dot(P * w) - 2.0 * w.dot(q); };
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index m = q.size();
  Eigen::VectorXd w(m);
  if (m == 2) {
    for (int a = 0; a <= steps; ++a) {
      w << a / double(steps), (steps - a) / double(steps);
      best = std::min(best, value(w));
    }
  } else {
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; a + b <= steps; ++b) {
        w << a / double(steps), b / double(steps), (steps - a - b) / double(steps);
        best = std::min(best, value(w));
      }
  }
  return best;
}

/// Best matching rate over every permutation of predicted labels onto truth
/// codes (labels assumed in [0, k)).
inline double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth,
                                   int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (perm[static_cast<std::size_t>(pred[i])] == truth[i]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

}  // namespace cmklr::testing
