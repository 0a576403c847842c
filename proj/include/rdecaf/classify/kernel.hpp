#pragma once

#include "rdecaf/types.hpp"

#include <optional>
#include <string>

namespace rdecaf {

enum class KernelKind { kRbf, kLinear };

KernelKind parse_kernel_kind(const std::string& name);
const char* to_string(KernelKind kind) noexcept;

/// Kernel choice as configured. An empty gamma means "scale":
/// 1 / (d * mean per-feature variance of the training data).
struct KernelParams {
  KernelKind kind = KernelKind::kRbf;
  std::optional<double> gamma;
};

/// Kernel with its bandwidth fixed.
struct ResolvedKernel {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;

  bool operator==(const ResolvedKernel&) const = default;
};

double scale_gamma(const Matrix& x);

/// Throws DataError for a non-finite or non-positive gamma.
ResolvedKernel resolve_kernel(const KernelParams& params, const Matrix& training);

double kernel_value(const ResolvedKernel& kernel, const Eigen::Ref<const Vector>& a,
                    const Eigen::Ref<const Vector>& b);

/// a.rows() x b.rows() kernel matrix.
Matrix kernel_matrix(const ResolvedKernel& kernel, const Matrix& a, const Matrix& b);

}  // namespace rdecaf
