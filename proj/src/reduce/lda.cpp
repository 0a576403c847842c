#include "rdecaf/reduce/lda.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/reduce/sign.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace rdecaf {

LdaModel lda_fit(const Matrix& x, const Labels& labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw DataError("LDA: label count does not match sample count");
  }
  if (!x.allFinite()) throw DataError("LDA input contains non-finite values");

  std::map<int, std::vector<Eigen::Index>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[labels[i]].push_back(static_cast<Eigen::Index>(i));
  }
  if (members.size() < 2) throw DataError("LDA needs at least two classes");
  for (const auto& [label, rows] : members) {
    if (rows.size() < 2) {
      throw DataError("LDA: class " + std::to_string(label) + " has fewer than 2 samples");
    }
  }

  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const auto n_classes = static_cast<Eigen::Index>(members.size());
  const Eigen::RowVectorXd overall = x.colwise().mean();

  // Rows of `within` are x_i - mu_class(i); rows of `between` are
  // sqrt(n_c) (mu_c - mu). S_w = within^T within, S_b = between^T between.
  Matrix within(n, d);
  Matrix between(n_classes, d);
  Matrix class_means_input(n_classes, d);
  std::vector<int> classes;
  Eigen::Index c = 0;
  for (const auto& [label, rows] : members) {
    classes.push_back(label);
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(d);
    for (Eigen::Index r : rows) mu += x.row(r);
    mu /= static_cast<double>(rows.size());
    for (Eigen::Index r : rows) within.row(r) = x.row(r) - mu;
    between.row(c) = std::sqrt(static_cast<double>(rows.size())) * (mu - overall);
    class_means_input.row(c) = mu;
    ++c;
  }

  const double trace_sw = within.squaredNorm();
  const double eps = kLdaShrinkage * trace_sw / static_cast<double>(d);
  if (!(eps > 0.0)) throw NumericalError("LDA: within-class scatter is zero");

  // With more features than samples, every generalized eigenvector with a
  // nonzero eigenvalue lies in the row span of [within; between], so the
  // problem is solved in an orthonormal basis of that span.
  Matrix basis;
  const bool reduced = d > n;
  if (reduced) {
    Matrix stacked(n + n_classes, d);
    stacked << within, between;
    Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cutoff = 1e-12 * s(0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    basis = svd.matrixV().leftCols(rank);
  }

  const Matrix w_red = reduced ? Matrix(within * basis) : within;
  const Matrix b_red = reduced ? Matrix(between * basis) : between;
  const Eigen::Index r = w_red.cols();

  Matrix sw = w_red.transpose() * w_red;
  sw.diagonal().array() += eps;
  const Matrix sb = b_red.transpose() * b_red;

  Eigen::LLT<Matrix> llt(sw);
  if (llt.info() != Eigen::Success) throw NumericalError("LDA: regularized S_w not positive definite");
  const Matrix l_inv = llt.matrixL().solve(Matrix::Identity(r, r));
  Matrix sym = l_inv * sb * l_inv.transpose();
  sym = 0.5 * (sym + sym.transpose());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("LDA: eigensolver failed");

  const Eigen::Index k = std::min<Eigen::Index>(n_classes - 1, r);
  LdaModel model;
  model.classes = std::move(classes);
  model.eigenvalues.resize(k);
  model.projection.resize(k, d);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = r - 1 - j;  // eigenvalues are ascending
    model.eigenvalues(j) = eig.eigenvalues()(src);
    Vector w = l_inv.transpose() * eig.eigenvectors().col(src);
    if (reduced) w = basis * w;
    model.projection.row(j) = w.normalized().transpose();
  }
  align_row_signs(model.projection);
  model.class_means = class_means_input * model.projection.transpose();
  return model;
}

Matrix lda_project(const LdaModel& model, const Matrix& x) {
  if (x.cols() != model.projection.cols()) {
    throw DataError("LDA model expects " + std::to_string(model.projection.cols()) +
                    " columns, got " + std::to_string(x.cols()));
  }
  return x * model.projection.transpose();
}

}  // namespace rdecaf
