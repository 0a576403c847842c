#pragma once

#include "rdecaf/types.hpp"

#include <cstddef>

namespace rdecaf {

/// Truncated SVD of the uncentered input.
struct SvdModel {
  /// k_max x d right singular vectors, one per row.
  Matrix components;
  Vector singular_values;
  /// s_j^2 / sum(s^2).
  Vector energy_ratio;

  std::size_t k_max() const noexcept { return static_cast<std::size_t>(components.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(components.cols()); }
};

SvdModel svd_fit(const Matrix& x);

/// x * components[0:k]^T, no mean subtraction.
Matrix svd_project(const SvdModel& model, const Matrix& x, std::size_t k);

}  // namespace rdecaf
