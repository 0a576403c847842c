#pragma once

#include "rdecaf/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rdecaf {

/// Feature matrix plus per-sample metadata. Row i of `features` belongs to
/// labels[i], magnifications[i] and sample_ids[i].
struct LabeledFeatureSet {
  Matrix features;
  Labels labels;
  std::vector<std::uint16_t> magnifications;
  std::vector<std::string> sample_ids;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(features.cols()); }

  /// Throws DataError describing the first violated invariant.
  void validate() const;

  /// Row subset in the order given.
  LabeledFeatureSet subset(const Indices& rows) const;

  bool operator==(const LabeledFeatureSet& other) const;
};

bool is_valid_magnification(int mag) noexcept;

/// Per-class counts {benign, malignant}.
std::array<std::size_t, 2> class_counts(const Labels& labels);

enum class FileFormat { kCsv, kRdcf };

FileFormat parse_file_format(const std::string& name);
const char* to_string(FileFormat format) noexcept;

LabeledFeatureSet load_feature_file(const std::filesystem::path& path, FileFormat format);
void save_feature_file(const LabeledFeatureSet& set, const std::filesystem::path& path,
                       FileFormat format);

/// Rows whose magnification is in `mags`, order preserved. Throws on an
/// empty result.
LabeledFeatureSet filter_by_magnification(const LabeledFeatureSet& set,
                                          const std::vector<std::uint16_t>& mags);

/// Randomly drops majority-class rows until both classes have the minority
/// count. Minority rows are all kept; row order is preserved.
LabeledFeatureSet downsample_balance(const LabeledFeatureSet& set, std::uint64_t seed);

}  // namespace rdecaf
