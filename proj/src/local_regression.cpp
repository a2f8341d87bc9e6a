#include "cmklr/local_regression.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "cmklr/error.hpp"

namespace cmklr {

NeighborIndex::NeighborIndex(Eigen::Index samples, Eigen::Index tau)
    : samples_(samples), tau_(tau), flat_(static_cast<std::size_t>(samples * tau)) {}

namespace {

void check_tau(Eigen::Index n, Eigen::Index tau) {
  if (tau < 1 || tau > n - 1)
    throw Error("neighborhood size tau=" + std::to_string(tau) + " out of range [1, " +
                std::to_string(n - 1) + "]");
}

}  // namespace

NeighborIndex select_neighbors(const Eigen::MatrixXd& K, Eigen::Index tau) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n) throw Error("kernel matrix is not square");
  check_tau(n, tau);

  NeighborIndex index(n, tau);
  std::vector<Eigen::Index> candidates(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = candidates.begin();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) *it++ = j;
    auto closer = [&](Eigen::Index a, Eigen::Index b) {
      if (K(i, a) != K(i, b)) return K(i, a) > K(i, b);
      return a < b;
    };
    std::partial_sort(candidates.begin(), candidates.begin() + tau, candidates.end(), closer);
    std::copy_n(candidates.begin(), tau, index.of(i).begin());
  }
  return index;
}

CoefficientMatrix build_coefficients(const Eigen::MatrixXd& K, Eigen::Index tau) {
  const NeighborIndex neighbors = select_neighbors(K, tau);
  const Eigen::Index n = K.rows();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n * tau));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = neighbors.of(i);
    double sum = 0.0;
    for (Eigen::Index j : row) sum += std::max(K(i, j), 0.0);
    if (sum > 0.0) {
      for (Eigen::Index j : row) {
        const double w = std::max(K(i, j), 0.0) / sum;
        if (w > 0.0) triplets.emplace_back(i, j, w);
      }
    } else {
      const double w = 1.0 / static_cast<double>(tau);
      for (Eigen::Index j : row) triplets.emplace_back(i, j, w);
    }
  }
  CoefficientMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

std::vector<CoefficientMatrix> build_coefficients(const KernelBank& bank, Eigen::Index tau) {
  if (bank.empty()) throw Error("kernel bank is empty");
  std::vector<CoefficientMatrix> coeffs;
  coeffs.reserve(bank.size());
  for (const auto& K : bank) {
    if (K.size() != bank.front().size()) throw Error("kernel bank has inconsistent sizes");
    coeffs.push_back(build_coefficients(K, tau));
  }
  return coeffs;
}

CoefficientMatrix fuse(std::span<const CoefficientMatrix> coeffs, const Eigen::VectorXd& w) {
  if (coeffs.empty()) throw Error("no coefficient matrices to fuse");
  if (static_cast<std::size_t>(w.size()) != coeffs.size())
    throw Error("weight vector has " + std::to_string(w.size()) + " entries for " +
                std::to_string(coeffs.size()) + " coefficient matrices");
  if (!w.allFinite() || w.minCoeff() < -1e-8 || std::abs(w.sum() - 1.0) > 1e-8)
    throw Error("mixture weights are not on the probability simplex");

  const Eigen::Index n = coeffs.front().rows();
  for (const auto& A : coeffs)
    if (A.rows() != n || A.cols() != n) throw Error("coefficient matrices differ in size");

  const Eigen::VectorXd weights = w.cwiseMax(0.0) / w.cwiseMax(0.0).sum();
  CoefficientMatrix fused(n, n);
  for (std::size_t r = 0; r < coeffs.size(); ++r)
    if (weights(static_cast<Eigen::Index>(r)) > 0.0)
      fused += weights(static_cast<Eigen::Index>(r)) * coeffs[r];
  fused.prune(0.0);
  fused.makeCompressed();
  return fused;
}

void check_row_stochastic(const CoefficientMatrix& A, double tol) {
  if (A.rows() != A.cols()) throw Error("coefficient matrix is not square");
  for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
    double sum = 0.0;
    for (CoefficientMatrix::InnerIterator it(A, i); it; ++it) {
      if (!(it.value() >= 0.0)) throw Error("coefficient matrix has a negative entry");
      sum += it.value();
    }
    if (std::abs(sum - 1.0) > tol)
      throw Error("coefficient row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                  ", not 1");
  }
}

void write_coefficients_csv(const CoefficientMatrix& A, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.precision(17);
  for (Eigen::Index i = 0; i < A.outerSize(); ++i)
    for (CoefficientMatrix::InnerIterator it(A, i); it; ++it)
      out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace cmklr
