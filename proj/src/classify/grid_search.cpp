#include "rdecaf/classify/grid_search.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/featureset/split.hpp"

namespace rdecaf {
namespace {

Matrix rows_of(const Matrix& x, const Indices& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = x.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

Labels labels_of(const Labels& labels, const Indices& idx) {
  Labels out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

}  // namespace

std::vector<GridCell> enumerate_grid(const GridSearchSpec& spec, const Matrix& x) {
  if (spec.kernels.empty() || spec.c_values.empty() || spec.gammas.empty()) {
    throw ConfigError("grid search needs non-empty kernel, C and gamma grids");
  }
  std::vector<GridCell> cells;
  for (KernelKind kind : spec.kernels) {
    for (double c : spec.c_values) {
      if (kind == KernelKind::kLinear) {
        cells.push_back({{kind, std::nullopt}, c, 0.0, 0.0});
        continue;
      }
      for (const auto& gamma : spec.gammas) {
        const double rank = gamma ? *gamma : scale_gamma(x);
        cells.push_back({{kind, gamma}, c, rank, 0.0});
      }
    }
  }
  return cells;
}

double cross_validated_accuracy(const Matrix& x, const Labels& labels,
                                const std::vector<Indices>& folds, const KernelParams& kernel,
                                const TrainOptions& options) {
  double total = 0.0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    Indices train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    const SvmModel model = svm_train(rows_of(x, train), labels_of(labels, train), kernel, options);
    const Labels predicted = svm_predict(model, rows_of(x, folds[f]));
    std::size_t correct = 0;
    for (std::size_t r = 0; r < folds[f].size(); ++r) {
      if (predicted[r] == labels[folds[f][r]]) ++correct;
    }
    total += static_cast<double>(correct) / static_cast<double>(folds[f].size());
  }
  return total / static_cast<double>(folds.size());
}

bool grid_tie_preferred(const GridCell& a, const GridCell& b) {
  if (a.c != b.c) return a.c < b.c;
  if (a.kernel.kind != b.kernel.kind) return a.kernel.kind == KernelKind::kRbf;
  return a.gamma_rank < b.gamma_rank;
}

GridSearchResult grid_search(const Matrix& x, const Labels& labels, const GridSearchSpec& spec,
                             const TrainOptions& options_template) {
  const FoldPlan folds = stratified_kfold(labels, spec.folds, spec.seed);
  GridSearchResult result;
  result.cells = enumerate_grid(spec, x);

  const GridCell* best = nullptr;
  for (GridCell& cell : result.cells) {
    TrainOptions options = options_template;
    options.c = cell.c;
    cell.cv_score = cross_validated_accuracy(x, labels, folds.folds, cell.kernel, options);
    if (best == nullptr || cell.cv_score > best->cv_score ||
        (cell.cv_score == best->cv_score && grid_tie_preferred(cell, *best))) {
      best = &cell;
    }
  }
  result.best_kernel = best->kernel;
  result.best_c = best->c;
  result.cv_score = best->cv_score;
  return result;
}

}  // namespace rdecaf
