#include "rdecaf/featureset/featureset.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/random.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace rdecaf {

bool is_valid_magnification(int mag) noexcept {
  return mag == 40 || mag == 100 || mag == 200 || mag == 400;
}

std::array<std::size_t, 2> class_counts(const Labels& labels) {
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kBenign && labels[i] != kMalignant) {
      throw DataError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                      " is not 0 or 1");
    }
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  return counts;
}

void LabeledFeatureSet::validate() const {
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw DataError("feature set is empty");
  if (features.cols() == 0) throw DataError("feature set has no feature columns");
  if (labels.size() != n || magnifications.size() != n || sample_ids.size() != n) {
    throw DataError("per-sample arrays do not match the " + std::to_string(n) +
                    " feature rows");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kBenign && labels[i] != kMalignant) {
      throw DataError("row " + std::to_string(i) + ": label " + std::to_string(labels[i]) +
                      " is not 0 or 1");
    }
    if (!is_valid_magnification(magnifications[i])) {
      throw DataError("row " + std::to_string(i) + ": magnification " +
                      std::to_string(magnifications[i]) + " is not one of 40/100/200/400");
    }
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (!std::isfinite(features(static_cast<Eigen::Index>(i), j))) {
        throw DataError("row " + std::to_string(i) + ": non-finite value in column " +
                        std::to_string(j));
      }
    }
  }
}

LabeledFeatureSet LabeledFeatureSet::subset(const Indices& rows) const {
  LabeledFeatureSet out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  out.magnifications.reserve(rows.size());
  out.sample_ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = rows[r];
    out.features.row(static_cast<Eigen::Index>(r)) =
        features.row(static_cast<Eigen::Index>(i));
    out.labels.push_back(labels[i]);
    out.magnifications.push_back(magnifications[i]);
    out.sample_ids.push_back(sample_ids[i]);
  }
  return out;
}

bool LabeledFeatureSet::operator==(const LabeledFeatureSet& other) const {
  return features.rows() == other.features.rows() && features.cols() == other.features.cols() &&
         features == other.features && labels == other.labels &&
         magnifications == other.magnifications && sample_ids == other.sample_ids;
}

LabeledFeatureSet filter_by_magnification(const LabeledFeatureSet& set,
                                          const std::vector<std::uint16_t>& mags) {
  Indices keep;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (std::find(mags.begin(), mags.end(), set.magnifications[i]) != mags.end()) {
      keep.push_back(i);
    }
  }
  if (keep.empty()) throw DataError("magnification filter selected no rows");
  return set.subset(keep);
}

LabeledFeatureSet downsample_balance(const LabeledFeatureSet& set, std::uint64_t seed) {
  const auto counts = class_counts(set.labels);
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("cannot balance a single-class feature set");
  }
  const int majority = counts[1] > counts[0] ? kMalignant : kBenign;
  const std::size_t target = std::min(counts[0], counts[1]);

  Indices majority_rows;
  Indices keep;
  for (std::size_t i = 0; i < set.size(); ++i) {
    (set.labels[i] == majority ? majority_rows : keep).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(majority_rows));
  keep.insert(keep.end(), majority_rows.begin(),
              majority_rows.begin() + static_cast<std::ptrdiff_t>(target));
  std::sort(keep.begin(), keep.end());
  return set.subset(keep);
}

}  // namespace rdecaf
