#pragma once

#include "rdecaf/types.hpp"

#include <cstdint>
#include <vector>

namespace rdecaf {

/// One train/test partition. Both index lists are sorted ascending.
struct SplitPlan {
  Indices train_indices;
  Indices test_indices;
  std::uint64_t seed = 0;

  bool operator==(const SplitPlan&) const = default;
};

/// k disjoint folds covering every index once; each fold sorted ascending.
struct FoldPlan {
  std::vector<Indices> folds;
  bool stratified = true;
  std::uint64_t seed = 0;

  /// Fold `k` as test set, the remaining folds as training set.
  SplitPlan as_split(std::size_t k) const;
};

/// Shuffled train/test split with |train| = round(ratio * n). Stratified
/// splits round per class; every class must land in both partitions.
SplitPlan random_split(std::size_t n, const Labels& labels, double ratio, bool stratified,
                       std::uint64_t seed);

/// `repeats` independent splits; split i is seeded with derive_seed(master_seed, i).
std::vector<SplitPlan> repeated_splits(std::size_t n, const Labels& labels, double ratio,
                                       bool stratified, std::uint64_t master_seed,
                                       std::size_t repeats);

/// Per-class shuffle, then round-robin dealing into k folds. Every class needs
/// at least k samples.
FoldPlan stratified_kfold(const Labels& labels, std::size_t k, std::uint64_t seed);

}  // namespace rdecaf
