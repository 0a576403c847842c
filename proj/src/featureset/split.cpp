#include "rdecaf/featureset/split.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>

namespace rdecaf {
namespace {

std::map<int, Indices> group_by_label(const Labels& labels) {
  std::map<int, Indices> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  return groups;
}

std::size_t rounded_share(double ratio, std::size_t count) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(count)));
}

}  // namespace

SplitPlan FoldPlan::as_split(std::size_t k) const {
  if (k >= folds.size()) throw DataError("fold index out of range");
  SplitPlan plan;
  plan.seed = seed;
  plan.test_indices = folds[k];
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == k) continue;
    plan.train_indices.insert(plan.train_indices.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  return plan;
}

SplitPlan random_split(std::size_t n, const Labels& labels, double ratio, bool stratified,
                       std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split ratio must lie in (0, 1)");
  if (n < 2) throw DataError("a split needs at least 2 samples");
  if (labels.size() != n) throw DataError("label count does not match sample count");

  Rng rng(seed);
  SplitPlan plan;
  plan.seed = seed;
  if (stratified) {
    for (auto& [label, rows] : group_by_label(labels)) {
      rng.shuffle(std::span<std::size_t>(rows));
      const std::size_t n_train = rounded_share(ratio, rows.size());
      if (n_train == 0 || n_train == rows.size()) {
        throw DataError("class " + std::to_string(label) + " with " +
                        std::to_string(rows.size()) +
                        " samples would get an empty train or test partition");
      }
      plan.train_indices.insert(plan.train_indices.end(), rows.begin(),
                                rows.begin() + static_cast<std::ptrdiff_t>(n_train));
      plan.test_indices.insert(plan.test_indices.end(),
                               rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
    }
  } else {
    Indices rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t n_train = rounded_share(ratio, n);
    if (n_train == 0 || n_train == n) {
      throw DataError("split ratio leaves an empty train or test partition");
    }
    plan.train_indices.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    plan.test_indices.assign(rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(plan.train_indices.begin(), plan.train_indices.end());
  std::sort(plan.test_indices.begin(), plan.test_indices.end());
  return plan;
}

std::vector<SplitPlan> repeated_splits(std::size_t n, const Labels& labels, double ratio,
                                       bool stratified, std::uint64_t master_seed,
                                       std::size_t repeats) {
  if (repeats < 1) throw DataError("repeats must be at least 1");
  std::vector<SplitPlan> plans;
  plans.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    plans.push_back(random_split(n, labels, ratio, stratified, derive_seed(master_seed, r)));
  }
  return plans;
}

FoldPlan stratified_kfold(const Labels& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("k-fold needs k >= 2");
  Rng rng(seed);
  FoldPlan plan;
  plan.seed = seed;
  plan.folds.resize(k);
  std::size_t next_fold = 0;
  for (auto& [label, rows] : group_by_label(labels)) {
    if (rows.size() < k) {
      throw DataError("class " + std::to_string(label) + " has " + std::to_string(rows.size()) +
                      " samples, fewer than k = " + std::to_string(k));
    }
    rng.shuffle(std::span<std::size_t>(rows));
    for (std::size_t idx : rows) {
      plan.folds[next_fold].push_back(idx);
      next_fold = (next_fold + 1) % k;
    }
  }
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

}  // namespace rdecaf
