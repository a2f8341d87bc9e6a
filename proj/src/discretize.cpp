#include "cmklr/discretize.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "cmklr/error.hpp"

namespace cmklr {

Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& Y) {
  Eigen::MatrixXd out = Y;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm < 1e-12)
      out.row(i).setZero();
    else
      out.row(i) /= norm;
  }
  return out;
}

namespace {

double assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
              std::vector<int>& labels, Eigen::VectorXd& distances) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < centroids.rows(); ++k) {
      const double d = (points.row(i) - centroids.row(k)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    distances(i) = best_d;
    inertia += best_d;
  }
  return inertia;
}

// Recomputes centroids; repairs empty clusters by moving the farthest point
// (from a cluster of size > 1) into them. Returns true if labels changed.
bool update_centroids(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                      std::vector<int>& labels, Eigen::VectorXd& distances) {
  const Eigen::Index c = centroids.rows();
  bool repaired = false;
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(c), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];

  for (Eigen::Index k = 0; k < c; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) continue;
    Eigen::Index victim = -1;
    double far = -1.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] <= 1) continue;
      if (distances(i) > far) {
        far = distances(i);
        victim = i;
      }
    }
    if (victim < 0) throw Error("k-means cannot repair an empty cluster: too few points");
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(victim)])];
    labels[static_cast<std::size_t>(victim)] = static_cast<int>(k);
    distances(victim) = 0.0;
    counts[static_cast<std::size_t>(k)] = 1;
    repaired = true;
  }

  centroids.setZero();
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    centroids.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
  for (Eigen::Index k = 0; k < c; ++k)
    centroids.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
  return repaired;
}

double inertia_of(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                  const std::vector<int>& labels) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    s += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return s;
}

}  // namespace

LloydRun lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, int max_iter) {
  const Eigen::Index n = points.rows();
  if (centroids.cols() != points.cols()) throw Error("centroid dimension mismatch");
  if (centroids.rows() < 1 || centroids.rows() > n) throw Error("invalid number of centroids");

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd distances(n);
  for (int it = 0; it < max_iter; ++it) {
    run.inertia_history.push_back(assign(points, centroids, labels, distances));
    const bool repaired = update_centroids(points, centroids, labels, distances);
    if (!repaired && labels == run.labels) {
      run.labels = std::move(labels);
      break;
    }
    run.labels = labels;
  }
  run.centroids = std::move(centroids);
  run.inertia = inertia_of(points, run.centroids, run.labels);
  return run;
}

Eigen::MatrixXd initial_centroids(const Eigen::MatrixXd& points, int c, std::uint64_t seed,
                                  int restart, KMeansInit init) {
  const Eigen::Index n = points.rows();
  if (c < 1 || c > n) throw Error("cannot draw " + std::to_string(c) + " centroids from " +
                                  std::to_string(n) + " points");
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  Eigen::MatrixXd centroids(c, points.cols());

  if (init == KMeansInit::random_rows) {
    // Partial Fisher-Yates: the first c slots end up a uniform sample without replacement.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (int k = 0; k < c; ++k) {
      std::uniform_int_distribution<Eigen::Index> pick(k, n - 1);
      std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick(rng))]);
      centroids.row(k) = points.row(order[static_cast<std::size_t>(k)]);
    }
    return centroids;
  }

  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centroids.row(0) = points.row(first(rng));
  Eigen::VectorXd d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 1; k < c; ++k) {
    const double total = d2.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (chosen = 0; chosen < n - 1; ++chosen) {
        target -= d2(chosen);
        if (target < 0.0) break;
      }
    } else {
      chosen = first(rng);
    }
    centroids.row(k) = points.row(chosen);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(k)).rowwise().squaredNorm());
  }
  return centroids;
}

Assignment kmeans(const Eigen::MatrixXd& points, int c, const KMeansOptions& options) {
  if (c < 1 || c > points.rows())
    throw Error("k-means needs 1 <= c <= n, got c=" + std::to_string(c) + ", n=" +
                std::to_string(points.rows()));
  if (options.restarts < 1) throw Error("k-means needs at least one restart");
  if (!points.allFinite()) throw Error("k-means input contains non-finite values");

  Assignment best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    LloydRun run = lloyd(points, initial_centroids(points, c, options.seed, r, options.init),
                         options.max_iter);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels = std::move(run.labels);
    }
  }
  return best;
}

}  // namespace cmklr
