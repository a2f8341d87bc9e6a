#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace cmklr {

struct Assignment {
  std::vector<int> labels;  ///< values in [0, c)
  double inertia = 0.0;     ///< within-cluster sum of squares of the kept restart
};

/// Scales every row to unit Euclidean norm; rows with norm < 1e-12 become zero.
Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& Y);

enum class KMeansInit { random_rows, plus_plus };

struct KMeansOptions {
  int restarts = 20;
  int max_iter = 300;
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::random_rows;
};

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  std::vector<double> inertia_history;  ///< after every assignment step
  double inertia = 0.0;
};

/// Lloyd iterations from the given centroids until the assignment stops
/// changing or `max_iter` is hit. Empty clusters seize the point farthest
/// from its current centroid.
LloydRun lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, int max_iter = 300);

/// Initial centroids of restart `restart`, drawn from a stream keyed by
/// (seed, restart).
Eigen::MatrixXd initial_centroids(const Eigen::MatrixXd& points, int c, std::uint64_t seed,
                                  int restart, KMeansInit init = KMeansInit::random_rows);

/// Best of `options.restarts` Lloyd runs by inertia; ties go to the lowest
/// restart index.
Assignment kmeans(const Eigen::MatrixXd& points, int c, const KMeansOptions& options = {});

}  // namespace cmklr
