#include "cmklr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "cmklr/error.hpp"

namespace cmklr {

namespace {

std::vector<int> remap(std::span<const int> labels, int& classes) {
  std::unordered_map<int, int> codes;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = codes.try_emplace(l, static_cast<int>(codes.size()));
    out.push_back(it->second);
  }
  classes = static_cast<int>(codes.size());
  return out;
}

void check_lengths(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size())
    throw Error("prediction has " + std::to_string(pred.size()) + " labels, ground truth has " +
                std::to_string(truth.size()));
  if (pred.empty()) throw Error("cannot evaluate an empty labeling");
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i)
    if (counts(i) > 0.0) {
      const double p = counts(i) / n;
      h -= p * std::log(p);
    }
  return h;
}

}  // namespace

Eigen::MatrixXi contingency_table(std::span<const int> pred, std::span<const int> truth) {
  check_lengths(pred, truth);
  int kp = 0;
  int kt = 0;
  const std::vector<int> p = remap(pred, kp);
  const std::vector<int> t = remap(truth, kt);
  Eigen::MatrixXi table = Eigen::MatrixXi::Zero(kp, kt);
  for (std::size_t i = 0; i < p.size(); ++i) ++table(p[i], t[i]);
  return table;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const auto k = static_cast<int>(cost.rows());
  if (cost.cols() != k) throw Error("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based potentials formulation; column 0 is a sentinel.
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> match(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(k + 1, inf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(k, -1);
  for (int j = 1; j <= k; ++j)
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  const Eigen::Index k = std::max(table.rows(), table.cols());
  // Maximize matches == minimize (max - count) on a zero-padded square table.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  cost.topLeftCorner(table.rows(), table.cols()) = table.cast<double>();
  const double top = cost.maxCoeff();
  cost = (top - cost.array()).matrix();
  const std::vector<int> mapping = hungarian(cost);

  long matched = 0;
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    const int col = mapping[static_cast<std::size_t>(r)];
    if (col < table.cols()) matched += table(r, col);
  }
  return static_cast<double>(matched) / static_cast<double>(pred.size());
}

double nmi(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXd table = contingency_table(pred, truth).cast<double>();
  const double n = static_cast<double>(pred.size());
  const Eigen::VectorXd rows = table.rowwise().sum();
  const Eigen::VectorXd cols = table.colwise().sum().transpose();
  const double h_pred = entropy(rows, n);
  const double h_true = entropy(cols, n);
  const double denom = std::max(h_pred, h_true);
  if (denom == 0.0) {
    // Both labelings are a single block, hence the same set partition.
    return 1.0;
  }
  double mi = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      if (nij > 0.0) mi += (nij / n) * std::log(nij * n / (rows(i) * cols(j)));
    }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double purity(std::span<const int> pred, std::span<const int> truth) {
  const Eigen::MatrixXi table = contingency_table(pred, truth);
  long total = 0;
  for (Eigen::Index r = 0; r < table.rows(); ++r) total += table.row(r).maxCoeff();
  return static_cast<double>(total) / static_cast<double>(pred.size());
}

Metrics evaluate(std::span<const int> pred, std::span<const int> truth) {
  return {accuracy(pred, truth), nmi(pred, truth), purity(pred, truth)};
}

}  // namespace cmklr
