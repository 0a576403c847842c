#pragma once

#include "rdecaf/classify/svm.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rdecaf {

/// Candidate grid. A gamma entry of nullopt stands for the "scale" heuristic;
/// gammas are ignored for the linear kernel.
struct GridSearchSpec {
  std::vector<KernelKind> kernels{KernelKind::kRbf, KernelKind::kLinear};
  std::vector<double> c_values{0.1, 1.0, 5.0, 10.0, 100.0};
  std::vector<std::optional<double>> gammas{std::nullopt, 1e-3, 1e-2, 1e-1};
  std::size_t folds = 5;
  std::uint64_t seed = 0;
};

struct GridCell {
  KernelParams kernel;
  double c = 0.0;
  /// Gamma used for tie-breaking ("scale" resolved on the full input).
  double gamma_rank = 0.0;
  double cv_score = 0.0;
};

struct GridSearchResult {
  KernelParams best_kernel;
  double best_c = 0.0;
  double cv_score = 0.0;
  /// Every evaluated cell in evaluation order.
  std::vector<GridCell> cells;
};

/// Cells in evaluation order: kernels, then C values, then gammas.
std::vector<GridCell> enumerate_grid(const GridSearchSpec& spec, const Matrix& x);

/// Mean stratified inner-CV accuracy of one cell on fixed folds.
double cross_validated_accuracy(const Matrix& x, const Labels& labels,
                                const std::vector<Indices>& folds, const KernelParams& kernel,
                                const TrainOptions& options);

/// Highest mean CV accuracy wins; ties go to smaller C, then rbf before
/// linear, then smaller gamma.
GridSearchResult grid_search(const Matrix& x, const Labels& labels, const GridSearchSpec& spec,
                             const TrainOptions& options_template);

/// True when `a` should be preferred over `b` at equal score.
bool grid_tie_preferred(const GridCell& a, const GridCell& b);

}  // namespace rdecaf
