#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>

namespace mupo {

/// One unit-norm embedding per row.
using EmbeddingMatrix = Eigen::MatrixXd;

inline constexpr double kUnitNormTol = 1e-9;

/// v / ||v||. Throws on the all-zero vector.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> normalized(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar norm = v.norm();
  if (norm == Scalar(0)) {
    throw std::invalid_argument("normalized: degenerate embedding (zero vector)");
  }
  return v.derived() / norm;
}

/// 1 - u.v on unit vectors, clamped to [0, 2] against round-off.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar cosine_distance(const Eigen::MatrixBase<DerivedU>& u,
                                          const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine_distance: dimension mismatch");
  }
  const Scalar d = Scalar(1) - u.dot(v);
  return std::clamp(d, Scalar(0), Scalar(2));
}

/// Mean cosine distance over all unordered row pairs. Needs at least two
/// rows.
template <typename Derived>
typename Derived::Scalar pairwise_diversity(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = rows.rows();
  if (n < 2) {
    throw std::invalid_argument("pairwise_diversity: diversity undefined for a single response");
  }
  Scalar sum = Scalar(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      sum += cosine_distance(rows.row(i), rows.row(j));
    }
  }
  return sum / (Scalar(n) * Scalar(n - 1) / Scalar(2));
}

template <typename Derived>
bool has_unit_rows(const Eigen::MatrixBase<Derived>& rows, double tol = kUnitNormTol) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (std::abs(static_cast<double>(rows.row(i).norm()) - 1.0) > tol) return false;
  }
  return true;
}

template <typename Derived>
void require_unit_rows(const Eigen::MatrixBase<Derived>& rows, const char* context) {
  if (!has_unit_rows(rows)) {
    throw std::invalid_argument(std::string(context) + ": embedding rows must be unit norm");
  }
}

}  // namespace mupo
