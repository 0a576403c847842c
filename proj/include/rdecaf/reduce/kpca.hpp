#pragma once

#include "rdecaf/classify/kernel.hpp"
#include "rdecaf/types.hpp"

#include <cstddef>

namespace rdecaf {

struct KpcaModel {
  Matrix training_rows;
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;
  /// n x k, column j scaled so that eigenvalues[j] * |alpha_j|^2 = 1.
  Matrix alphas;
  /// Eigenvalues of the double-centered training kernel, descending, > 0.
  Vector eigenvalues;
  /// Centering statistics of the training kernel matrix.
  Vector kernel_column_means;
  double kernel_grand_mean = 0.0;

  std::size_t components() const noexcept { return static_cast<std::size_t>(alphas.cols()); }
};

/// K - 1K - K1 + 1K1 for a square kernel matrix.
Matrix center_kernel_matrix(const Matrix& kernel);

/// Keeps the k leading components. Eigenvalues <= 1e-10 * lambda_max count
/// as zero; asking for more components than remain is an error.
KpcaModel kpca_fit(const Matrix& x, const KernelParams& params, std::size_t k);

Matrix kpca_project(const KpcaModel& model, const Matrix& x);

}  // namespace rdecaf
