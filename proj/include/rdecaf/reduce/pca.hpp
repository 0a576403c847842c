#pragma once

#include "rdecaf/types.hpp"

#include <cstddef>

namespace rdecaf {

/// Principal axes of the centered training data.
struct PcaModel {
  Vector mean;
  /// k_max x d, one principal direction per row, orthonormal.
  Matrix components;
  /// Covariance eigenvalues (divisor n - 1), descending.
  Vector explained_variance;
  Vector explained_variance_ratio;

  std::size_t k_max() const noexcept { return static_cast<std::size_t>(components.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(components.cols()); }
};

/// Thin SVD of the centered matrix; k_max = min(n, d). Requires n >= 2.
PcaModel pca_fit(const Matrix& x);

/// (x - mean) * components[0:k]^T.
Matrix pca_project(const PcaModel& model, const Matrix& x, std::size_t k);

/// Maps scores (n x k) back to input space: scores * components[0:k] + mean.
Matrix pca_reconstruct(const PcaModel& model, const Matrix& scores);

}  // namespace rdecaf
