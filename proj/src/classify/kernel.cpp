#include "rdecaf/classify/kernel.hpp"

#include "rdecaf/error.hpp"

#include <algorithm>
#include <cmath>

namespace rdecaf {

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "rbf") return KernelKind::kRbf;
  if (name == "linear") return KernelKind::kLinear;
  throw ConfigError("unknown kernel '" + name + "' (expected rbf or linear)");
}

const char* to_string(KernelKind kind) noexcept {
  return kind == KernelKind::kRbf ? "rbf" : "linear";
}

double scale_gamma(const Matrix& x) {
  if (x.rows() == 0 || x.cols() == 0) return 1.0;
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const double mean_var =
      (x.rowwise() - mean).array().square().sum() / static_cast<double>(x.rows() * x.cols());
  if (!(mean_var > 0.0)) return 1.0;
  return 1.0 / (static_cast<double>(x.cols()) * mean_var);
}

ResolvedKernel resolve_kernel(const KernelParams& params, const Matrix& training) {
  ResolvedKernel kernel{params.kind, params.gamma ? *params.gamma : scale_gamma(training)};
  if (!std::isfinite(kernel.gamma) || kernel.gamma <= 0.0) {
    throw DataError("kernel gamma must be finite and positive");
  }
  return kernel;
}

double kernel_value(const ResolvedKernel& kernel, const Eigen::Ref<const Vector>& a,
                    const Eigen::Ref<const Vector>& b) {
  if (kernel.kind == KernelKind::kLinear) return a.dot(b);
  return std::exp(-kernel.gamma * (a - b).squaredNorm());
}

Matrix kernel_matrix(const ResolvedKernel& kernel, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DataError("kernel_matrix: column count mismatch");
  Matrix k = a * b.transpose();
  if (kernel.kind == KernelKind::kLinear) return k;

  const Vector na = a.rowwise().squaredNorm();
  const Vector nb = b.rowwise().squaredNorm();
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      const double dist = std::max(0.0, na(i) + nb(j) - 2.0 * k(i, j));
      k(i, j) = std::exp(-kernel.gamma * dist);
    }
  }
  return k;
}

}  // namespace rdecaf
