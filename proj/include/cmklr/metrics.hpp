#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cmklr {

/// Counts of (predicted cluster, true class) pairs. Both label sets are
/// remapped to contiguous codes in order of first appearance.
Eigen::MatrixXi contingency_table(std::span<const int> pred, std::span<const int> truth);

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// potentials, O(k^3)). Returns the column assigned to each row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

/// Clustering accuracy under the best one-to-one cluster-to-class mapping.
double accuracy(std::span<const int> pred, std::span<const int> truth);

/// Mutual information normalized by max(H(truth), H(pred)), natural log.
double nmi(std::span<const int> pred, std::span<const int> truth);

/// (1/n) sum over predicted clusters of their largest true-class overlap.
double purity(std::span<const int> pred, std::span<const int> truth);

struct Metrics {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

Metrics evaluate(std::span<const int> pred, std::span<const int> truth);

}  // namespace cmklr
