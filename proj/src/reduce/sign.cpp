#include "rdecaf/reduce/sign.hpp"

namespace rdecaf {

void align_row_signs(Matrix& directions) {
  for (Eigen::Index r = 0; r < directions.rows(); ++r) {
    Eigen::Index arg = 0;
    directions.row(r).cwiseAbs().maxCoeff(&arg);
    if (directions(r, arg) < 0.0) directions.row(r) *= -1.0;
  }
}

void align_column_signs(Matrix& directions) {
  for (Eigen::Index c = 0; c < directions.cols(); ++c) {
    Eigen::Index arg = 0;
    directions.col(c).cwiseAbs().maxCoeff(&arg);
    if (directions(arg, c) < 0.0) directions.col(c) *= -1.0;
  }
}

}  // namespace rdecaf
