#include "rdecaf/reduce/svd.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/reduce/sign.hpp"

#include <Eigen/SVD>

#include <string>

namespace rdecaf {

SvdModel svd_fit(const Matrix& x) {
  if (x.rows() < 2) throw DataError("SVD needs at least 2 samples");
  if (!x.allFinite()) throw DataError("SVD input contains non-finite values");

  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinV);
  SvdModel model;
  model.singular_values = svd.singularValues();
  model.components = svd.matrixV().transpose();
  align_row_signs(model.components);

  const Vector energy = model.singular_values.array().square();
  const double total = energy.sum();
  model.energy_ratio = total > 0.0 ? Vector(energy / total) : Vector(Vector::Zero(energy.size()));
  return model;
}

Matrix svd_project(const SvdModel& model, const Matrix& x, std::size_t k) {
  if (k < 1 || k > model.k_max()) {
    throw DataError("component count " + std::to_string(k) + " outside [1, " +
                    std::to_string(model.k_max()) + "]");
  }
  if (static_cast<std::size_t>(x.cols()) != model.dims()) {
    throw DataError("SVD model expects " + std::to_string(model.dims()) + " columns, got " +
                    std::to_string(x.cols()));
  }
  return x * model.components.topRows(static_cast<Eigen::Index>(k)).transpose();
}

}  // namespace rdecaf
