#pragma once

#include "rdecaf/classify/svm.hpp"
#include "rdecaf/evaluate/metrics.hpp"
#include "rdecaf/featureset/featureset.hpp"
#include "rdecaf/featureset/scaler.hpp"
#include "rdecaf/featureset/split.hpp"
#include "rdecaf/pipeline/config.hpp"
#include "rdecaf/reduce/reduce.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rdecaf {

/// Fitted reduction for one split. Only the member matching `method` is set.
struct ReductionModel {
  ReductionMethod method = ReductionMethod::kNone;
  std::optional<PcaModel> pca;
  std::optional<SvdModel> svd;
  std::optional<LdaModel> lda;
  std::optional<KpcaModel> kpca;
  /// CEV curve used to pick k (PCA curve for kpca and pca_tsne).
  std::optional<CevCurve> curve;
};

/// Everything fitted before the classifier, plus the transformed rows.
struct FittedSplit {
  std::optional<ScalerModel> scaler;
  ReductionModel reduction;
  std::optional<ScalerModel> rescaler;
  std::optional<std::size_t> chosen_k;
  std::optional<double> cev_reached;
  /// All rows after scaling, reduction and rescaling.
  Matrix features;
};

struct SplitRecord {
  std::size_t index = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// FNV-1a digest of the sorted test indices.
  std::uint64_t test_digest = 0;
  std::optional<std::size_t> chosen_k;
  std::optional<double> cev_reached;
  ConfusionMatrix confusion;
  MetricSet metrics;
  std::optional<double> benign_recall;
  ResolvedKernel kernel;
  double c = 0.0;
  std::size_t support_vectors = 0;
  bool svm_converged = true;
  double wall_seconds = 0.0;
};

struct CountSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t min = 0;
  std::size_t max = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t samples = 0;
  std::size_t benign = 0;
  std::size_t malignant = 0;
  std::size_t dims = 0;
  std::vector<SplitRecord> splits;
  MetricSummary summary;
  std::optional<CountSummary> chosen_k;
  std::vector<std::string> caveats;
};

struct SweepRow {
  double target = 0.0;
  double mean_k = 0.0;
  MetricSummary summary;
  std::vector<std::size_t> chosen_k;
  std::vector<double> accuracies;
  std::vector<std::uint64_t> test_digests;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

std::uint64_t indices_digest(const Indices& indices) noexcept;

/// Loads the input file and applies the magnification filter and balancing.
LabeledFeatureSet load_experiment_data(const ExperimentConfig& config);
LabeledFeatureSet prepare_data(const ExperimentConfig& config, const LabeledFeatureSet& raw);

std::vector<SplitPlan> plan_splits(const ExperimentConfig& config, const LabeledFeatureSet& data);

/// Scaler and reduction for one split, fitted on the rows the fit scope allows.
FittedSplit fit_split_models(const ExperimentConfig& config, const LabeledFeatureSet& data,
                             const SplitPlan& plan);

ExperimentReport run_experiment(const ExperimentConfig& config);
/// `data` is used as-is (already filtered and balanced).
ExperimentReport run_experiment(const ExperimentConfig& config, const LabeledFeatureSet& data);

/// Paired CEV sweep: every target sees the same splits and fitted reductions.
SweepResult sweep_cev(const ExperimentConfig& config, const std::vector<double>& targets);
SweepResult sweep_cev(const ExperimentConfig& config, const LabeledFeatureSet& data,
                      const std::vector<double>& targets);

/// CEV curve of the (scaled) data with the reduction fitted on every row.
CevCurve emit_cev_curve(const ExperimentConfig& config);
CevCurve emit_cev_curve(const ExperimentConfig& config, const LabeledFeatureSet& data);

/// Applies the configured scaling and reduction fitted on every row.
LabeledFeatureSet reduce_dataset(const ExperimentConfig& config, const LabeledFeatureSet& data);

}  // namespace rdecaf
