#pragma once

#include "rdecaf/classify/grid_search.hpp"
#include "rdecaf/classify/kernel.hpp"
#include "rdecaf/featureset/featureset.hpp"
#include "rdecaf/reduce/tsne.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rdecaf {

inline constexpr const char* kToolkitName = "rdecaf";
inline constexpr const char* kToolkitVersion = "1.0.0";

enum class ReductionMethod { kNone, kPca, kSvd, kLda, kKpca, kPcaTsne };
enum class FitScope { kTrainOnly, kAllData };
enum class SplitProtocol { kRepeatedRandom, kStratifiedKfold };
enum class ClassWeightMode { kNone, kBalanced, kExplicit };

const char* to_string(ReductionMethod method) noexcept;
const char* to_string(FitScope scope) noexcept;

struct ReductionConfig {
  ReductionMethod method = ReductionMethod::kNone;
  /// Exactly one of these is set when method != none.
  std::optional<double> cev_target;
  std::optional<std::size_t> k;
  FitScope fit_scope = FitScope::kTrainOnly;
  /// Standardize the reduced features (fitted on the same rows as the
  /// reduction) before the SVM.
  bool rescale_reduced = true;
  /// kPCA kernel; gamma defaults to the "scale" heuristic.
  KernelParams kpca_kernel;
  TsneConfig tsne;
};

struct ClassifierConfig {
  double c = 5.0;
  KernelParams kernel;
  ClassWeightMode weight_mode = ClassWeightMode::kNone;
  std::array<double, 2> explicit_weights{1.0, 1.0};
  double tolerance = 1e-3;
  std::size_t max_iterations = 10000;
  /// When set, C and the kernel are chosen per split by inner CV on the
  /// training partition.
  std::optional<GridSearchSpec> grid_search;
};

struct SplitConfig {
  SplitProtocol protocol = SplitProtocol::kRepeatedRandom;
  double ratio = 0.8;
  std::size_t repeats = 10;
  bool stratified = false;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
};

struct OutputConfig {
  std::string report;         // JSON report path; empty = not written
  std::string tables_prefix;  // companion CSV prefix; empty = derived from report
  bool include_timing = false;  // wall time makes reports non-reproducible
};

struct ExperimentConfig {
  std::string input_path;
  FileFormat input_format = FileFormat::kRdcf;
  /// Empty = all magnifications pooled.
  std::vector<std::uint16_t> magnifications;
  bool scale = true;
  ReductionConfig reduction;
  ClassifierConfig classifier;
  SplitConfig split;
  bool balance = false;
  std::size_t threads = 1;
  OutputConfig output;
};

/// Throws ConfigError on an inconsistent configuration.
void validate_config(const ExperimentConfig& config);

/// Strict parse: unknown keys and wrong types are ConfigErrors.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rdecaf
