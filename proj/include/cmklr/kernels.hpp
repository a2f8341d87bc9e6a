#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "cmklr/error.hpp"

namespace cmklr {

enum class KernelKind { gaussian, polynomial, cosine };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view text);

/// Parameters of one candidate kernel. Only the fields relevant to `kind` are
/// meaningful: `delta` (and the `d0` it was scaled from) for gaussian, `a` and
/// `b` for polynomial, nothing for cosine.
struct KernelParams {
  double delta = 0.0;
  double d0 = 0.0;
  double a = 0.0;
  int b = 0;

  bool operator==(const KernelParams&) const = default;
};

struct KernelMatrix {
  Eigen::MatrixXd values;
  KernelKind kind = KernelKind::gaussian;
  KernelParams params;

  Eigen::Index size() const { return values.rows(); }
};

using KernelBank = std::vector<KernelMatrix>;

/// Gaussian bandwidth multipliers of the single-view bank, in bank order.
inline constexpr double kGaussianScales[] = {0.01, 0.05, 0.1, 1.0, 10.0, 50.0, 100.0};

/// (a, b) pairs of the single-view polynomial kernels, in bank order.
inline constexpr struct {
  double a;
  int b;
} kPolynomialGrid[] = {{0.0, 2}, {0.0, 4}, {1.0, 2}, {1.0, 4}};

namespace gram {

/// Pairwise squared Euclidean distances via ||x||^2 + ||y||^2 - 2 x'y,
/// clamped at zero, exact zero diagonal and exactly symmetric.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
squared_distances(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = X.rows();
  const Matrix G = X * X.transpose();
  const auto norms = G.diagonal();
  Matrix D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = Scalar(0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar d = norms(i) + norms(j) - Scalar(2) * G(i, j);
      D(i, j) = D(j, i) = d > Scalar(0) ? d : Scalar(0);
    }
  }
  return D;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
gaussian(const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar delta) {
  using Scalar = typename Derived::Scalar;
  auto K = squared_distances(X);
  const Scalar scale = Scalar(-1) / (Scalar(2) * delta * delta);
  const Eigen::Index n = K.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < n; ++j) K(i, j) = K(j, i) = std::exp(K(i, j) * scale);
  }
  return K;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
polynomial(const Eigen::MatrixBase<Derived>& X, typename Derived::Scalar a, int b) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix G = X * X.transpose();
  const Eigen::Index n = G.rows();
  Matrix K(n, n);
  auto ipow = [b](Scalar base) {
    Scalar r(1);
    for (int k = 0; k < b; ++k) r *= base;
    return r;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) K(i, j) = K(j, i) = ipow(a + G(i, j));
  return K;
}

/// Cosine similarity; caller guarantees no zero rows.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
cosine(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix K = X * X.transpose();
  const Eigen::Index n = K.rows();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms = K.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Scalar v = K(i, j) / (norms(i) * norms(j));
      v = v > Scalar(1) ? Scalar(1) : (v < Scalar(-1) ? Scalar(-1) : v);
      K(i, j) = K(j, i) = v;
    }
  }
  return K;
}

}  // namespace gram

/// Mean Euclidean distance over unordered pairs i < j (the Gaussian scale D0).
double mean_pairwise_distance(const Eigen::MatrixXd& X);

KernelMatrix gaussian_kernel(const Eigen::MatrixXd& X, double delta);
KernelMatrix polynomial_kernel(const Eigen::MatrixXd& X, double a, int b);
KernelMatrix cosine_kernel(const Eigen::MatrixXd& X);

/// K'_ij = K_ij / sqrt(K_ii K_jj). Requires a strictly positive diagonal.
KernelMatrix normalize_unit_diagonal(KernelMatrix K);

/// Seven Gaussian kernels (delta = s * D0), four polynomial kernels and one
/// cosine kernel, each unit-diagonal normalized.
KernelBank build_single_view_bank(const Eigen::MatrixXd& X);

/// One Gaussian (delta = D0 of the view) and one cosine kernel per view.
KernelBank build_multi_view_bank(const std::vector<Eigen::MatrixXd>& views);

/// Per-feature standardization with population standard deviation; constant
/// columns are only centered.
Eigen::MatrixXd zscore(const Eigen::MatrixXd& X);

}  // namespace cmklr
