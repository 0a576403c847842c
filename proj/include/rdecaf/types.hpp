#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rdecaf {

/// Samples are rows, features are columns.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

using Labels = std::vector<int>;
using Indices = std::vector<std::size_t>;

inline constexpr int kBenign = 0;
inline constexpr int kMalignant = 1;

}  // namespace rdecaf
