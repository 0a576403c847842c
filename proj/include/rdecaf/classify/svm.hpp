#pragma once

#include "rdecaf/classify/kernel.hpp"
#include "rdecaf/types.hpp"

#include <array>
#include <cstddef>
#include <filesystem>

namespace rdecaf {

struct TrainOptions {
  double c = 5.0;
  /// Multiplier on C for {benign, malignant}.
  std::array<double, 2> class_weights{1.0, 1.0};
  /// Stop once the maximal KKT violation m(alpha) - M(alpha) drops below this.
  double tolerance = 1e-3;
  /// Cap on solver work, in passes of n pair updates each.
  std::size_t max_iterations = 10000;
  /// Memory cap for the float32 training kernel cache. Above it, kernel rows
  /// are recomputed on demand.
  std::size_t cache_bytes = std::size_t{1} << 30;
};

/// w_c = n / (2 n_c).
std::array<double, 2> balanced_class_weights(const Labels& labels);

/// Solver diagnostics. Not persisted.
struct TrainStats {
  bool converged = false;
  std::size_t iterations = 0;
  /// Final maximal violation m(alpha) - M(alpha).
  double kkt_gap = 0.0;
};

/// Decision function f(x) = sum_i coef_i k(sv_i, x) + bias, with
/// coef_i = alpha_i y_i and y in {-1, +1} (+1 = malignant).
struct SvmModel {
  Matrix support_vectors;
  Vector dual_coefficients;
  double bias = 0.0;
  ResolvedKernel kernel;

  /// Training-row index of each support vector. Not persisted.
  Indices support_indices;
  TrainStats stats;

  std::size_t dims() const noexcept { return static_cast<std::size_t>(support_vectors.cols()); }
};

/// Soft-margin C-SVM dual solved by SMO with maximal-violating-pair working
/// set selection. Labels are 0/1 and both classes must be present.
SvmModel svm_train(const Matrix& x, const Labels& labels, const KernelParams& kernel,
                   const TrainOptions& options);

Vector svm_decision(const SvmModel& model, const Matrix& x);

/// 1 (malignant) iff decision >= 0.
Labels labels_from_decision(const Vector& decision);

Labels svm_predict(const SvmModel& model, const Matrix& x);

/// Binary container: magic RSVM, u16 version, u8 kernel kind, f64 gamma,
/// u32 m, u32 d, f64 support vectors (row-major), f64 coefficients, f64 bias.
void save_svm_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm_model(const std::filesystem::path& path);

}  // namespace rdecaf
