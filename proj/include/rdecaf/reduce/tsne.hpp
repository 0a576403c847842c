#pragma once

#include "rdecaf/types.hpp"

#include <cstddef>
#include <cstdint>

namespace rdecaf {

/// Exact (O(n^2)) t-SNE settings.
struct TsneConfig {
  std::size_t output_dims = 2;
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch_iteration = 250;
  std::uint64_t seed = 0;
};

/// Symmetrized input affinities.
struct TsneAffinities {
  /// n x n, p_ij = (p_{j|i} + p_{i|j}) / 2n, zero diagonal.
  Matrix joint;
  /// Achieved perplexity exp(H(P_i)) of every conditional distribution.
  Vector perplexities;
  /// Gaussian precision 1 / (2 sigma_i^2) found by bisection.
  Vector precisions;
};

struct TsneResult {
  Matrix embedding;
  /// KL(P || Q) without exaggeration, before the first and after the last step.
  double kl_initial = 0.0;
  double kl_final = 0.0;
};

/// Throws DataError if the perplexity is not below (n - 1) / 3.
void check_tsne_feasible(std::size_t n, const TsneConfig& config);

TsneAffinities tsne_affinities(const Matrix& x, double perplexity);

/// KL(P || Q) for an embedding, Q from the Student-t kernel.
double tsne_kl_divergence(const Matrix& joint, const Matrix& embedding);

TsneResult tsne_embed(const Matrix& x, const TsneConfig& config);

}  // namespace rdecaf
