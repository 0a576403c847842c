#include "rdecaf/reduce/tsne.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rdecaf {
namespace {

constexpr double kEntropyTolerance = 1e-5;  // nats
constexpr int kMaxBisectionSteps = 200;
constexpr double kMinGain = 0.01;

Matrix squared_distances(const Matrix& x) {
  const Vector norms = x.rowwise().squaredNorm();
  Matrix d = -2.0 * x * x.transpose();
  d.colwise() += norms;
  d.rowwise() += norms.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

// Student-t numerators 1 / (1 + |y_i - y_j|^2) with a zero diagonal.
Matrix student_t_kernel(const Matrix& y) {
  Matrix num = (1.0 + squared_distances(y).array()).inverse().matrix();
  num.diagonal().setZero();
  return num;
}

}  // namespace

void check_tsne_feasible(std::size_t n, const TsneConfig& config) {
  if (config.output_dims != 2 && config.output_dims != 3) {
    throw DataError("t-SNE output_dims must be 2 or 3");
  }
  if (!(config.perplexity > 0.0)) throw DataError("t-SNE perplexity must be positive");
  if (n < 2 || !(config.perplexity < (static_cast<double>(n) - 1.0) / 3.0)) {
    throw DataError("t-SNE perplexity " + std::to_string(config.perplexity) +
                    " is infeasible for " + std::to_string(n) +
                    " points (needs perplexity < (n - 1) / 3)");
  }
  if (config.iterations < 1) throw DataError("t-SNE needs at least one iteration");
}

TsneAffinities tsne_affinities(const Matrix& x, double perplexity) {
  const Eigen::Index n = x.rows();
  const Matrix dist = squared_distances(x);
  const double target = std::log(perplexity);

  TsneAffinities out;
  out.perplexities.resize(n);
  out.precisions.resize(n);
  Matrix conditional = Matrix::Zero(n, n);
  Vector row(n);

  for (Eigen::Index i = 0; i < n; ++i) {
    // Offsetting by the nearest distance keeps the exponentials from
    // underflowing; it cancels in the normalization.
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, dist(i, j));
    }

    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double entropy = 0.0;
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      double sum = 0.0;
      double weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double shifted = dist(i, j) - nearest;
        row(j) = j == i ? 0.0 : std::exp(-beta * shifted);
        sum += row(j);
        weighted += row(j) * shifted;
      }
      entropy = std::log(sum) + beta * weighted / sum;
      row /= sum;
      const double gap = entropy - target;
      if (std::abs(gap) < kEntropyTolerance) break;
      if (gap > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    conditional.row(i) = row.transpose();
    out.perplexities(i) = std::exp(entropy);
    out.precisions(i) = beta;
  }

  out.joint = (conditional + conditional.transpose()) / (2.0 * static_cast<double>(n));
  return out;
}

double tsne_kl_divergence(const Matrix& joint, const Matrix& embedding) {
  const Matrix num = student_t_kernel(embedding);
  const double z = num.sum();
  double kl = 0.0;
  for (Eigen::Index j = 0; j < joint.cols(); ++j) {
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
      const double p = joint(i, j);
      if (i == j || p <= 0.0) continue;
      const double q = std::max(num(i, j) / z, std::numeric_limits<double>::min());
      kl += p * std::log(p / q);
    }
  }
  return kl;
}

TsneResult tsne_embed(const Matrix& x, const TsneConfig& config) {
  const Eigen::Index n = x.rows();
  check_tsne_feasible(static_cast<std::size_t>(n), config);
  if (!x.allFinite()) throw DataError("t-SNE input contains non-finite values");

  const TsneAffinities affinities = tsne_affinities(x, config.perplexity);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(affinities.perplexities(i) - config.perplexity) / config.perplexity >= 0.01) {
      throw NumericalError("t-SNE: bandwidth search failed to reach the perplexity at point " +
                           std::to_string(i));
    }
  }
  const Matrix& p = affinities.joint;
  const auto dims = static_cast<Eigen::Index>(config.output_dims);

  Rng rng(config.seed);
  Matrix y(n, dims);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < dims; ++c) y(i, c) = 1e-4 * rng.normal();
  }
  Matrix update = Matrix::Zero(n, dims);
  Matrix gains = Matrix::Ones(n, dims);
  Matrix grad(n, dims);

  TsneResult result;
  result.kl_initial = tsne_kl_divergence(p, y);

  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    const double exaggeration =
        iter < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
    const double momentum =
        iter < config.momentum_switch_iteration ? config.initial_momentum : config.final_momentum;

    const Matrix num = student_t_kernel(y);
    const double z = num.sum();
    // dC/dy_i = 4 sum_j (p_ij - q_ij) (1 + |y_i - y_j|^2)^-1 (y_i - y_j)
    const Matrix weights = ((exaggeration * p).array() - num.array() / z) * num.array();
    const Vector row_sums = weights.rowwise().sum();
    grad = 4.0 * (row_sums.asDiagonal() * y - weights * y);

    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < dims; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
        gains(i, c) = same_sign ? std::max(gains(i, c) * 0.8, kMinGain) : gains(i, c) + 0.2;
      }
    }
    update = momentum * update - config.learning_rate * gains.cwiseProduct(grad);
    y += update;
    y.rowwise() -= y.colwise().mean();
  }

  result.kl_final = tsne_kl_divergence(p, y);
  result.embedding = std::move(y);
  return result;
}

}  // namespace rdecaf
