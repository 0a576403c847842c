#pragma once

#include "rdecaf/types.hpp"

namespace rdecaf {

/// Per-column standardization statistics (population std, divisor n).
struct ScalerModel {
  Vector mean;
  Vector stddev;
};

ScalerModel scaler_fit(const Matrix& features);

/// (x - mean) / std per column; columns with std == 0 map to 0.
Matrix scaler_apply(const ScalerModel& model, const Matrix& features);

}  // namespace rdecaf
