#include "rdecaf/reduce/kpca.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/reduce/sign.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace rdecaf {

Matrix center_kernel_matrix(const Matrix& kernel) {
  if (kernel.rows() != kernel.cols()) throw DataError("kernel matrix must be square");
  const Vector col_means = kernel.colwise().mean().transpose();
  const Vector row_means = kernel.rowwise().mean();
  const double grand = col_means.mean();
  Matrix centered = kernel;
  centered.colwise() -= row_means;
  centered.rowwise() -= col_means.transpose();
  centered.array() += grand;
  return centered;
}

KpcaModel kpca_fit(const Matrix& x, const KernelParams& params, std::size_t k) {
  if (x.rows() < 2) throw DataError("kPCA needs at least 2 samples");
  if (!x.allFinite()) throw DataError("kPCA input contains non-finite values");
  if (k < 1 || k > static_cast<std::size_t>(x.rows())) {
    throw DataError("kPCA component count " + std::to_string(k) + " outside [1, n]");
  }

  const ResolvedKernel kernel = resolve_kernel(params, x);
  const Matrix gram = kernel_matrix(kernel, x, x);

  KpcaModel model;
  model.training_rows = x;
  model.kind = kernel.kind;
  model.gamma = kernel.gamma;
  model.kernel_column_means = gram.colwise().mean().transpose();
  model.kernel_grand_mean = model.kernel_column_means.mean();

  Matrix centered = center_kernel_matrix(gram);
  centered = 0.5 * (centered + centered.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(centered);
  if (eig.info() != Eigen::Success) throw NumericalError("kPCA: eigensolver failed");

  const Eigen::Index n = centered.rows();
  const double lambda_max = eig.eigenvalues()(n - 1);
  std::size_t positive = 0;
  if (lambda_max > 0.0) {
    for (Eigen::Index j = n - 1; j >= 0 && eig.eigenvalues()(j) > 1e-10 * lambda_max; --j) {
      ++positive;
    }
  }
  if (k > positive) {
    throw DataError("kPCA: requested " + std::to_string(k) + " components but only " +
                    std::to_string(positive) + " eigenvalues are positive");
  }

  const auto kk = static_cast<Eigen::Index>(k);
  model.eigenvalues.resize(kk);
  model.alphas.resize(n, kk);
  for (Eigen::Index j = 0; j < kk; ++j) {
    const double lambda = eig.eigenvalues()(n - 1 - j);
    model.eigenvalues(j) = lambda;
    model.alphas.col(j) = eig.eigenvectors().col(n - 1 - j) / std::sqrt(lambda);
  }
  align_column_signs(model.alphas);
  return model;
}

Matrix kpca_project(const KpcaModel& model, const Matrix& x) {
  if (x.cols() != model.training_rows.cols()) {
    throw DataError("kPCA model expects " + std::to_string(model.training_rows.cols()) +
                    " columns, got " + std::to_string(x.cols()));
  }
  Matrix rows = kernel_matrix({model.kind, model.gamma}, x, model.training_rows);
  const Vector row_means = rows.rowwise().mean();
  rows.colwise() -= row_means;
  rows.rowwise() -= model.kernel_column_means.transpose();
  rows.array() += model.kernel_grand_mean;
  return rows * model.alphas;
}

}  // namespace rdecaf
