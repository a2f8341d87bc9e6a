#include "cmklr/kernels.hpp"

#include <cmath>
#include <string>

namespace cmklr {

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian:
      return "gaussian";
    case KernelKind::polynomial:
      return "polynomial";
    case KernelKind::cosine:
      return "cosine";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view text) {
  if (text == "gaussian") return KernelKind::gaussian;
  if (text == "polynomial") return KernelKind::polynomial;
  if (text == "cosine") return KernelKind::cosine;
  throw Error("unknown kernel kind '" + std::string(text) + "'");
}

namespace {

void require_features(const Eigen::MatrixXd& X, Eigen::Index min_rows) {
  if (X.rows() < min_rows)
    throw Error("feature matrix needs at least " + std::to_string(min_rows) + " rows, got " +
                std::to_string(X.rows()));
  if (X.cols() < 1) throw Error("feature matrix has no columns");
  if (!X.allFinite()) throw Error("feature matrix contains non-finite entries");
}

}  // namespace

double mean_pairwise_distance(const Eigen::MatrixXd& X) {
  require_features(X, 2);
  const Eigen::MatrixXd D = gram::squared_distances(X);
  const Eigen::Index n = X.rows();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) sum += std::sqrt(D(i, j));
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double d0 = sum / pairs;
  if (!(d0 > 0.0)) throw Error("all samples coincide: mean pairwise distance is zero");
  return d0;
}

KernelMatrix gaussian_kernel(const Eigen::MatrixXd& X, double delta) {
  require_features(X, 1);
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error("gaussian bandwidth must be positive");
  KernelMatrix K{gram::gaussian(X, delta), KernelKind::gaussian, {}};
  K.params.delta = delta;
  return K;
}

KernelMatrix polynomial_kernel(const Eigen::MatrixXd& X, double a, int b) {
  require_features(X, 1);
  if (b < 1) throw Error("polynomial degree must be positive");
  if (!std::isfinite(a)) throw Error("polynomial offset must be finite");
  KernelMatrix K{gram::polynomial(X, a, b), KernelKind::polynomial, {}};
  K.params.a = a;
  K.params.b = b;
  if (!K.values.allFinite()) throw Error("polynomial kernel overflowed");
  return K;
}

KernelMatrix cosine_kernel(const Eigen::MatrixXd& X) {
  require_features(X, 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    if (X.row(i).squaredNorm() == 0.0)
      throw Error("cosine kernel undefined: row " + std::to_string(i) + " is the zero vector");
  return KernelMatrix{gram::cosine(X), KernelKind::cosine, {}};
}

KernelMatrix normalize_unit_diagonal(KernelMatrix K) {
  const Eigen::Index n = K.size();
  const Eigen::VectorXd diag = K.values.diagonal();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(diag(i) > 0.0))
      throw Error("cannot normalize kernel: diagonal entry " + std::to_string(i) +
                  " is not positive");
  const Eigen::VectorXd inv = diag.cwiseSqrt().cwiseInverse();
  for (Eigen::Index i = 0; i < n; ++i) {
    K.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j)
      K.values(i, j) = K.values(j, i) = K.values(i, j) * inv(i) * inv(j);
  }
  return K;
}

KernelBank build_single_view_bank(const Eigen::MatrixXd& X) {
  const double d0 = mean_pairwise_distance(X);
  KernelBank bank;
  bank.reserve(12);
  for (double s : kGaussianScales) {
    KernelMatrix K = normalize_unit_diagonal(gaussian_kernel(X, s * d0));
    K.params.d0 = d0;
    bank.push_back(std::move(K));
  }
  for (const auto& [a, b] : kPolynomialGrid)
    bank.push_back(normalize_unit_diagonal(polynomial_kernel(X, a, b)));
  bank.push_back(normalize_unit_diagonal(cosine_kernel(X)));
  return bank;
}

KernelBank build_multi_view_bank(const std::vector<Eigen::MatrixXd>& views) {
  if (views.empty()) throw Error("multi-view bank needs at least one view");
  const Eigen::Index n = views.front().rows();
  for (std::size_t v = 0; v < views.size(); ++v)
    if (views[v].rows() != n)
      throw Error("view " + std::to_string(v) + " has " + std::to_string(views[v].rows()) +
                  " samples, expected " + std::to_string(n));
  KernelBank bank;
  bank.reserve(2 * views.size());
  for (const auto& X : views) {
    const double d0 = mean_pairwise_distance(X);
    KernelMatrix G = normalize_unit_diagonal(gaussian_kernel(X, d0));
    G.params.d0 = d0;
    bank.push_back(std::move(G));
    bank.push_back(normalize_unit_diagonal(cosine_kernel(X)));
  }
  return bank;
}

Eigen::MatrixXd zscore(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Z = X.rowwise() - X.colwise().mean();
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    const double sd = std::sqrt(Z.col(j).squaredNorm() / n);
    if (sd > 0.0) Z.col(j) /= sd;
  }
  return Z;
}

}  // namespace cmklr
