#include "rdecaf/reduce/pca.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/reduce/sign.hpp"

#include <Eigen/SVD>

#include <string>

namespace rdecaf {
namespace {

void check_projection_args(const PcaModel& model, const Matrix& x, std::size_t k) {
  if (k < 1 || k > model.k_max()) {
    throw DataError("component count " + std::to_string(k) + " outside [1, " +
                    std::to_string(model.k_max()) + "]");
  }
  if (static_cast<std::size_t>(x.cols()) != model.dims()) {
    throw DataError("PCA model expects " + std::to_string(model.dims()) + " columns, got " +
                    std::to_string(x.cols()));
  }
}

}  // namespace

PcaModel pca_fit(const Matrix& x) {
  if (x.rows() < 2) throw DataError("PCA needs at least 2 samples");
  if (!x.allFinite()) throw DataError("PCA input contains non-finite values");

  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  model.components = svd.matrixV().transpose();
  align_row_signs(model.components);

  model.explained_variance = s.array().square() / static_cast<double>(x.rows() - 1);
  const double total = model.explained_variance.sum();
  model.explained_variance_ratio = total > 0.0
                                       ? Vector(model.explained_variance / total)
                                       : Vector(Vector::Zero(s.size()));
  return model;
}

Matrix pca_project(const PcaModel& model, const Matrix& x, std::size_t k) {
  check_projection_args(model, x, k);
  return (x.rowwise() - model.mean.transpose()) *
         model.components.topRows(static_cast<Eigen::Index>(k)).transpose();
}

Matrix pca_reconstruct(const PcaModel& model, const Matrix& scores) {
  const auto k = static_cast<std::size_t>(scores.cols());
  if (k < 1 || k > model.k_max()) throw DataError("score width outside the model's range");
  Matrix out = scores * model.components.topRows(scores.cols());
  out.rowwise() += model.mean.transpose();
  return out;
}

}  // namespace rdecaf
