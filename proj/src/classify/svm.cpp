#include "rdecaf/classify/svm.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/featureset/featureset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rdecaf {
namespace {

constexpr double kTau = 1e-12;
constexpr Eigen::Index kCacheBlockRows = 256;

// Training kernel rows as float32. Holds the whole n x n matrix when it fits
// under the memory cap, otherwise recomputes the two most recent rows.
class KernelRows {
 public:
  KernelRows(const ResolvedKernel& kernel, const Matrix& x, std::size_t cache_bytes)
      : kernel_(kernel), x_(x), n_(x.rows()) {
    const auto n = static_cast<std::size_t>(n_);
    full_ = n * n * sizeof(float) <= cache_bytes;
    if (full_) {
      values_.resize(n * n);
      for (Eigen::Index start = 0; start < n_; start += kCacheBlockRows) {
        const Eigen::Index rows = std::min(kCacheBlockRows, n_ - start);
        const Matrix block = kernel_matrix(kernel_, x_.middleRows(start, rows), x_);
        for (Eigen::Index r = 0; r < rows; ++r) {
          float* dst = values_.data() + static_cast<std::size_t>(start + r) * n;
          for (Eigen::Index c = 0; c < n_; ++c) dst[c] = static_cast<float>(block(r, c));
        }
      }
    } else {
      values_.resize(2 * n);
      slot_row_ = {-1, -1};
    }
  }

  float diagonal(Eigen::Index i) const {
    if (full_) return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1)];
    return static_cast<float>(kernel_value(kernel_, x_.row(i).transpose(), x_.row(i).transpose()));
  }

  const float* row(Eigen::Index i) {
    const auto n = static_cast<std::size_t>(n_);
    if (full_) return values_.data() + static_cast<std::size_t>(i) * n;
    for (int s = 0; s < 2; ++s) {
      if (slot_row_[s] == i) {
        last_slot_ = s;
        return values_.data() + static_cast<std::size_t>(s) * n;
      }
    }
    const int s = 1 - last_slot_;
    last_slot_ = s;
    slot_row_[s] = i;
    const Matrix k = kernel_matrix(kernel_, x_.row(i), x_);
    float* dst = values_.data() + static_cast<std::size_t>(s) * n;
    for (Eigen::Index c = 0; c < n_; ++c) dst[c] = static_cast<float>(k(0, c));
    return dst;
  }

 private:
  ResolvedKernel kernel_;
  const Matrix& x_;
  Eigen::Index n_;
  bool full_ = false;
  std::vector<float> values_;
  std::array<Eigen::Index, 2> slot_row_{};
  int last_slot_ = 1;
};

struct DualSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  TrainStats stats;
};

// min 1/2 a^T Q a - e^T a  s.t.  0 <= a_i <= bound_i, y^T a = 0,
// Q_ij = y_i y_j K_ij. Gradient G = Q a - e is kept up to date.
DualSolution solve_dual(KernelRows& rows, const std::vector<double>& y,
                        const std::vector<double>& bound, const TrainOptions& options) {
  const std::size_t n = y.size();
  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);
  std::vector<double> diag(n);
  for (std::size_t t = 0; t < n; ++t) diag[t] = rows.diagonal(static_cast<Eigen::Index>(t));

  auto at_upper = [&](std::size_t t) { return sol.alpha[t] >= bound[t]; };
  auto at_lower = [&](std::size_t t) { return sol.alpha[t] <= 0.0; };
  auto in_up = [&](std::size_t t) { return y[t] > 0 ? !at_upper(t) : !at_lower(t); };
  auto in_low = [&](std::size_t t) { return y[t] > 0 ? !at_lower(t) : !at_upper(t); };

  const std::size_t max_steps = options.max_iterations * std::max<std::size_t>(n, 1);
  std::size_t step = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; step < max_steps; ++step) {
    // Maximal violating pair on v_t = -y_t G_t.
    double v_max = -std::numeric_limits<double>::infinity();
    double v_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > v_max) {
        v_max = v;
        i = t;
      }
      if (in_low(t) && v < v_min) {
        v_min = v;
        j = t;
      }
    }
    gap = v_max - v_min;
    if (i == n || j == n || gap < options.tolerance) break;

    const float* k_i = rows.row(static_cast<Eigen::Index>(i));
    const float* k_j = rows.row(static_cast<Eigen::Index>(j));
    const double q_ij = y[i] * y[j] * k_i[j];
    const double c_i = bound[i];
    const double c_j = bound[j];
    const double old_i = sol.alpha[i];
    const double old_j = sol.alpha[j];
    double& a_i = sol.alpha[i];
    double& a_j = sol.alpha[j];

    if (y[i] != y[j]) {
      double quad = diag[i] + diag[j] + 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a_i - a_j;
      a_i += delta;
      a_j += delta;
      if (diff > 0.0) {
        if (a_j < 0.0) {
          a_j = 0.0;
          a_i = diff;
        }
      } else if (a_i < 0.0) {
        a_i = 0.0;
        a_j = -diff;
      }
      if (diff > c_i - c_j) {
        if (a_i > c_i) {
          a_i = c_i;
          a_j = c_i - diff;
        }
      } else if (a_j > c_j) {
        a_j = c_j;
        a_i = c_j + diff;
      }
    } else {
      double quad = diag[i] + diag[j] - 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a_i + a_j;
      a_i -= delta;
      a_j += delta;
      if (sum > c_i) {
        if (a_i > c_i) {
          a_i = c_i;
          a_j = sum - c_i;
        }
      } else if (a_j < 0.0) {
        a_j = 0.0;
        a_i = sum;
      }
      if (sum > c_j) {
        if (a_j > c_j) {
          a_j = c_j;
          a_i = sum - c_j;
        }
      } else if (a_i < 0.0) {
        a_i = 0.0;
        a_j = sum;
      }
    }

    const double d_i = a_i - old_i;
    const double d_j = a_j - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * k_i[t] * d_i + y[j] * k_j[t] * d_j);
    }
  }

  sol.stats.iterations = step;
  sol.stats.kkt_gap = gap;
  sol.stats.converged = gap < options.tolerance;

  // rho: mean of y_t G_t over free variables, else the midpoint of the
  // feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (at_upper(t)) {
      if (y[t] < 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (at_lower(t)) {
      if (y[t] > 0) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  sol.rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (upper + lower);
  return sol;
}

}  // namespace

std::array<double, 2> balanced_class_weights(const Labels& labels) {
  const auto counts = class_counts(labels);
  if (counts[0] == 0 || counts[1] == 0) throw DataError("balanced weights need both classes");
  const auto n = static_cast<double>(labels.size());
  return {n / (2.0 * static_cast<double>(counts[0])), n / (2.0 * static_cast<double>(counts[1]))};
}

SvmModel svm_train(const Matrix& x, const Labels& labels, const KernelParams& kernel_params,
                   const TrainOptions& options) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw DataError("SVM: label count does not match sample count");
  }
  if (!x.allFinite()) throw DataError("SVM input contains non-finite values");
  const auto counts = class_counts(labels);
  if (counts[0] == 0 || counts[1] == 0) throw DataError("SVM training needs both classes");
  if (!(options.c > 0.0) || !std::isfinite(options.c)) throw DataError("SVM C must be positive");
  for (double w : options.class_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DataError("SVM class weights must be positive");
  }

  SvmModel model;
  model.kernel = resolve_kernel(kernel_params, x);

  const std::size_t n = labels.size();
  std::vector<double> y(n);
  std::vector<double> bound(n);
  for (std::size_t t = 0; t < n; ++t) {
    y[t] = labels[t] == kMalignant ? 1.0 : -1.0;
    bound[t] = options.c * options.class_weights[static_cast<std::size_t>(labels[t])];
  }

  KernelRows rows(model.kernel, x, options.cache_bytes);
  const DualSolution sol = solve_dual(rows, y, bound, options);

  for (std::size_t t = 0; t < n; ++t) {
    if (sol.alpha[t] > 0.0) model.support_indices.push_back(t);
  }
  const auto m = static_cast<Eigen::Index>(model.support_indices.size());
  model.support_vectors.resize(m, x.cols());
  model.dual_coefficients.resize(m);
  for (Eigen::Index s = 0; s < m; ++s) {
    const std::size_t t = model.support_indices[static_cast<std::size_t>(s)];
    model.support_vectors.row(s) = x.row(static_cast<Eigen::Index>(t));
    model.dual_coefficients(s) = sol.alpha[t] * y[t];
  }
  model.bias = -sol.rho;
  model.stats = sol.stats;
  return model;
}

Vector svm_decision(const SvmModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.dims()) {
    throw DataError("SVM model expects " + std::to_string(model.dims()) + " columns, got " +
                    std::to_string(x.cols()));
  }
  Vector out = kernel_matrix(model.kernel, x, model.support_vectors) * model.dual_coefficients;
  out.array() += model.bias;
  return out;
}

Labels labels_from_decision(const Vector& decision) {
  Labels out(static_cast<std::size_t>(decision.size()));
  for (Eigen::Index i = 0; i < decision.size(); ++i) {
    out[static_cast<std::size_t>(i)] = decision(i) >= 0.0 ? kMalignant : kBenign;
  }
  return out;
}

Labels svm_predict(const SvmModel& model, const Matrix& x) {
  return labels_from_decision(svm_decision(model, x));
}

}  // namespace rdecaf
