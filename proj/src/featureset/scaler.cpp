#include "rdecaf/featureset/scaler.hpp"

#include "rdecaf/error.hpp"

#include <cmath>
#include <string>

namespace rdecaf {

ScalerModel scaler_fit(const Matrix& features) {
  if (features.rows() < 1) throw DataError("scaler_fit needs at least one row");
  const auto n = static_cast<double>(features.rows());
  ScalerModel model;
  model.mean = features.colwise().mean().transpose();
  model.stddev.resize(features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double ss = (features.col(j).array() - model.mean(j)).square().sum();
    model.stddev(j) = std::sqrt(ss / n);
  }
  return model;
}

Matrix scaler_apply(const ScalerModel& model, const Matrix& features) {
  if (features.cols() != model.mean.size()) {
    throw DataError("scaler expects " + std::to_string(model.mean.size()) + " columns, got " +
                    std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    if (model.stddev(j) > 0.0) {
      out.col(j) = (features.col(j).array() - model.mean(j)) / model.stddev(j);
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

}  // namespace rdecaf
