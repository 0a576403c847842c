#pragma once

#include "rdecaf/types.hpp"

#include <vector>

namespace rdecaf {

/// Fisher discriminant projection. At most (#classes - 1) rows, each of unit
/// norm; binary labels give exactly one direction.
struct LdaModel {
  Matrix projection;
  std::vector<int> classes;
  /// Row c is the projected mean of classes[c].
  Matrix class_means;
  Vector eigenvalues;
};

/// Solves S_b w = lambda (S_w + eps I) w with eps = 1e-4 trace(S_w) / d.
/// When d exceeds the number of samples the problem is solved inside the
/// span of the data, which yields the same nonzero-eigenvalue directions.
LdaModel lda_fit(const Matrix& x, const Labels& labels);

Matrix lda_project(const LdaModel& model, const Matrix& x);

inline constexpr double kLdaShrinkage = 1e-4;

}  // namespace rdecaf
