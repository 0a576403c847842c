#pragma once

#include "rdecaf/reduce/cev.hpp"
#include "rdecaf/reduce/kpca.hpp"
#include "rdecaf/reduce/lda.hpp"
#include "rdecaf/reduce/pca.hpp"
#include "rdecaf/reduce/sign.hpp"
#include "rdecaf/reduce/svd.hpp"
#include "rdecaf/reduce/tsne.hpp"

namespace rdecaf {

struct PcaTsneResult {
  TsneResult tsne;
  std::size_t pca_components = 0;
  double cev_reached = 0.0;
};

/// PCA down to the CEV-selected size, then t-SNE on the PCA scores.
PcaTsneResult pca_then_tsne(const Matrix& x, double cev_target, const TsneConfig& config);

}  // namespace rdecaf
