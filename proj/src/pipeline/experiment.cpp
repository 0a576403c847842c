#include "rdecaf/pipeline/experiment.hpp"

#include "rdecaf/classify/grid_search.hpp"
#include "rdecaf/error.hpp"
#include "rdecaf/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace rdecaf {
namespace {

constexpr std::uint64_t kBalanceStream = 0xBA1A;
constexpr std::uint64_t kGridStream = 0x6121D;
constexpr std::uint64_t kTsneStream = 0x75E;

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

Indices all_rows(std::size_t n) {
  Indices out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

[[noreturn]] void rethrow_annotated(const Error& e, const std::string& prefix) {
  const std::string what = prefix + e.what();
  switch (e.kind()) {
    case ErrorKind::kConfig: throw ConfigError(what);
    case ErrorKind::kData: throw DataError(what);
    case ErrorKind::kNumerical: throw NumericalError(what);
  }
  throw DataError(what);
}

// Scaling plus the k-independent part of the reduction.
struct BaseFit {
  std::optional<ScalerModel> scaler;
  Matrix scaled;
  ReductionModel reduction;
};

BaseFit fit_base(const ExperimentConfig& config, const LabeledFeatureSet& data,
                 const Indices& fit_idx) {
  BaseFit base;
  if (config.scale) {
    base.scaler = scaler_fit(rows_of(data.features, fit_idx));
    base.scaled = scaler_apply(*base.scaler, data.features);
  } else {
    base.scaled = data.features;
  }

  const ReductionConfig& r = config.reduction;
  ReductionModel& model = base.reduction;
  model.method = r.method;
  switch (r.method) {
    case ReductionMethod::kNone:
      break;
    case ReductionMethod::kSvd:
      model.svd = svd_fit(rows_of(base.scaled, fit_idx));
      model.curve = cev_curve(model.svd->energy_ratio);
      break;
    case ReductionMethod::kPca:
    case ReductionMethod::kPcaTsne:
      model.pca = pca_fit(rows_of(base.scaled, fit_idx));
      model.curve = cev_curve(model.pca->explained_variance_ratio);
      break;
    case ReductionMethod::kKpca:
      if (r.cev_target) {
        model.curve = cev_curve(pca_fit(rows_of(base.scaled, fit_idx)).explained_variance_ratio);
      }
      break;
    case ReductionMethod::kLda:
      model.lda = lda_fit(rows_of(base.scaled, fit_idx), labels_of(data.labels, fit_idx));
      break;
  }
  return base;
}

std::size_t k_from_target(const ReductionModel& model, const ReductionConfig& r) {
  if (r.k) return *r.k;
  return select_k_for_cev(*model.curve, *r.cev_target);
}

// Projects every row with k components, then optionally rescales.
FittedSplit finish_fit(const ExperimentConfig& config, const BaseFit& base, const Indices& fit_idx,
                       std::optional<std::size_t> k, std::uint64_t split_seed) {
  const ReductionConfig& r = config.reduction;
  FittedSplit out;
  out.scaler = base.scaler;
  out.reduction = base.reduction;

  auto check_k = [&](std::size_t k_max) {
    if (*k > k_max) {
      throw DataError("requested k = " + std::to_string(*k) + " exceeds the " +
                      std::to_string(k_max) + " available components");
    }
  };

  switch (r.method) {
    case ReductionMethod::kNone:
      out.features = base.scaled;
      return out;
    case ReductionMethod::kPca:
      check_k(base.reduction.pca->k_max());
      out.features = pca_project(*base.reduction.pca, base.scaled, *k);
      break;
    case ReductionMethod::kSvd:
      check_k(base.reduction.svd->k_max());
      out.features = svd_project(*base.reduction.svd, base.scaled, *k);
      break;
    case ReductionMethod::kLda:
      out.features = lda_project(*base.reduction.lda, base.scaled);
      break;
    case ReductionMethod::kKpca:
      out.reduction.kpca = kpca_fit(rows_of(base.scaled, fit_idx), r.kpca_kernel, *k);
      out.features = kpca_project(*out.reduction.kpca, base.scaled);
      break;
    case ReductionMethod::kPcaTsne: {
      check_k(base.reduction.pca->k_max());
      TsneConfig tsne = r.tsne;
      tsne.seed = derive_seed(r.tsne.seed, derive_seed(split_seed, kTsneStream));
      out.features = tsne_embed(pca_project(*base.reduction.pca, base.scaled, *k), tsne).embedding;
      break;
    }
  }
  out.chosen_k = r.method == ReductionMethod::kLda ? std::optional<std::size_t>(1) : k;
  if (out.reduction.curve && k && *k <= out.reduction.curve->k_max()) {
    out.cev_reached = out.reduction.curve->at(*k);
  }
  if (r.rescale_reduced) {
    out.rescaler = scaler_fit(rows_of(out.features, fit_idx));
    out.features = scaler_apply(*out.rescaler, out.features);
  }
  return out;
}

Indices fit_indices(const ExperimentConfig& config, const LabeledFeatureSet& data,
                    const SplitPlan& plan) {
  return config.reduction.fit_scope == FitScope::kTrainOnly ? plan.train_indices
                                                            : all_rows(data.size());
}

TrainOptions train_options(const ClassifierConfig& c, const Labels& train_labels) {
  TrainOptions options;
  options.c = c.c;
  options.tolerance = c.tolerance;
  options.max_iterations = c.max_iterations;
  switch (c.weight_mode) {
    case ClassWeightMode::kNone: break;
    case ClassWeightMode::kBalanced: options.class_weights = balanced_class_weights(train_labels); break;
    case ClassWeightMode::kExplicit: options.class_weights = c.explicit_weights; break;
  }
  return options;
}

SplitRecord classify_split(const ExperimentConfig& config, const LabeledFeatureSet& data,
                           const SplitPlan& plan, const FittedSplit& fitted, std::size_t index) {
  const Matrix train_x = rows_of(fitted.features, plan.train_indices);
  const Labels train_y = labels_of(data.labels, plan.train_indices);
  TrainOptions options = train_options(config.classifier, train_y);
  KernelParams kernel = config.classifier.kernel;
  if (config.classifier.grid_search) {
    GridSearchSpec spec = *config.classifier.grid_search;
    spec.seed = derive_seed(spec.seed, derive_seed(plan.seed, kGridStream));
    const GridSearchResult best = grid_search(train_x, train_y, spec, options);
    kernel = best.best_kernel;
    options.c = best.best_c;
  }
  const SvmModel model = svm_train(train_x, train_y, kernel, options);
  const Labels predicted = svm_predict(model, rows_of(fitted.features, plan.test_indices));

  SplitRecord rec;
  rec.index = index;
  rec.train_size = plan.train_indices.size();
  rec.test_size = plan.test_indices.size();
  rec.test_digest = indices_digest(plan.test_indices);
  rec.chosen_k = fitted.chosen_k;
  rec.cev_reached = fitted.cev_reached;
  rec.confusion = confusion(labels_of(data.labels, plan.test_indices), predicted);
  rec.metrics = metrics(rec.confusion);
  if (rec.confusion.tn + rec.confusion.fp > 0) rec.benign_recall = benign_recall(rec.confusion);
  rec.kernel = model.kernel;
  rec.c = options.c;
  rec.support_vectors = model.support_indices.size();
  rec.svm_converged = model.stats.converged;
  return rec;
}

// Runs job(i) for i in [0, count) on up to `threads` workers. The error from
// the lowest failing index is rethrown, prefixed with "split i: ".
template <typename Job>
void run_splits(std::size_t count, std::size_t threads, Job job) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      try {
        job(i);
      } catch (const Error& e) {
        rethrow_annotated(e, "split " + std::to_string(i) + ": ");
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CountSummary summarize_counts(const std::vector<std::size_t>& values) {
  CountSummary s;
  if (values.empty()) return s;
  const auto n = static_cast<double>(values.size());
  for (std::size_t v : values) s.mean += static_cast<double>(v);
  s.mean /= n;
  double ss = 0.0;
  for (std::size_t v : values) ss += (static_cast<double>(v) - s.mean) * (static_cast<double>(v) - s.mean);
  s.stddev = std::sqrt(ss / n);
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

std::vector<std::string> caveats_for(const ExperimentConfig& config) {
  std::vector<std::string> out;
  const ReductionConfig& r = config.reduction;
  if (r.method != ReductionMethod::kNone && r.fit_scope == FitScope::kAllData) {
    out.emplace_back("scaler and reduction are fitted on all rows, test rows included");
  }
  if (r.method == ReductionMethod::kPcaTsne) {
    out.emplace_back(
        "t-SNE has no out-of-sample projection: train and test rows are embedded jointly and "
        "the split is respected only when training the SVM");
  }
  if (r.method == ReductionMethod::kKpca && r.cev_target) {
    out.emplace_back("kPCA component count is chosen from the linear PCA CEV curve of the same rows");
  }
  return out;
}

void require_sweepable(const ExperimentConfig& config, const std::vector<double>& targets) {
  const ReductionMethod m = config.reduction.method;
  if (m != ReductionMethod::kPca && m != ReductionMethod::kSvd) {
    throw ConfigError("sweep-cev needs reduction method pca or svd");
  }
  if (targets.empty()) throw ConfigError("sweep-cev needs at least one target");
  for (double t : targets) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("CEV targets must lie in (0, 1]");
  }
}

}  // namespace

std::uint64_t indices_digest(const Indices& indices) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t v : indices) {
    auto x = static_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

LabeledFeatureSet prepare_data(const ExperimentConfig& config, const LabeledFeatureSet& raw) {
  LabeledFeatureSet data =
      config.magnifications.empty() ? raw : filter_by_magnification(raw, config.magnifications);
  if (config.balance) data = downsample_balance(data, derive_seed(config.split.seed, kBalanceStream));
  return data;
}

LabeledFeatureSet load_experiment_data(const ExperimentConfig& config) {
  if (config.input_path.empty()) throw ConfigError("config has no input path");
  return prepare_data(config, load_feature_file(config.input_path, config.input_format));
}

std::vector<SplitPlan> plan_splits(const ExperimentConfig& config, const LabeledFeatureSet& data) {
  const SplitConfig& s = config.split;
  if (s.protocol == SplitProtocol::kRepeatedRandom) {
    return repeated_splits(data.size(), data.labels, s.ratio, s.stratified, s.seed, s.repeats);
  }
  const FoldPlan folds = stratified_kfold(data.labels, s.folds, s.seed);
  std::vector<SplitPlan> plans;
  for (std::size_t k = 0; k < folds.folds.size(); ++k) plans.push_back(folds.as_split(k));
  return plans;
}

FittedSplit fit_split_models(const ExperimentConfig& config, const LabeledFeatureSet& data,
                             const SplitPlan& plan) {
  const Indices fit_idx = fit_indices(config, data, plan);
  const BaseFit base = fit_base(config, data, fit_idx);
  std::optional<std::size_t> k;
  if (config.reduction.method != ReductionMethod::kNone &&
      config.reduction.method != ReductionMethod::kLda) {
    k = k_from_target(base.reduction, config.reduction);
  }
  return finish_fit(config, base, fit_idx, k, plan.seed);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, load_experiment_data(config));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const LabeledFeatureSet& data) {
  validate_config(config);
  data.validate();
  const std::vector<SplitPlan> plans = plan_splits(config, data);

  ExperimentReport report;
  report.config = config;
  report.samples = data.size();
  const auto counts = class_counts(data.labels);
  report.benign = counts[0];
  report.malignant = counts[1];
  report.dims = data.dims();
  report.splits.resize(plans.size());

  run_splits(plans.size(), config.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const FittedSplit fitted = fit_split_models(config, data, plans[i]);
    SplitRecord rec = classify_split(config, data, plans[i], fitted, i);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.splits[i] = std::move(rec);
  });

  std::vector<MetricSet> per_split;
  std::vector<std::size_t> ks;
  for (const SplitRecord& rec : report.splits) {
    per_split.push_back(rec.metrics);
    if (rec.chosen_k) ks.push_back(*rec.chosen_k);
  }
  report.summary = aggregate(per_split);
  if (!ks.empty()) report.chosen_k = summarize_counts(ks);
  report.caveats = caveats_for(config);
  for (const SplitRecord& rec : report.splits) {
    if (!rec.svm_converged) {
      report.caveats.push_back("SVM hit the iteration cap before converging in split " +
                               std::to_string(rec.index));
    }
  }
  return report;
}

SweepResult sweep_cev(const ExperimentConfig& config, const std::vector<double>& targets) {
  return sweep_cev(config, load_experiment_data(config), targets);
}

SweepResult sweep_cev(const ExperimentConfig& config, const LabeledFeatureSet& data,
                      const std::vector<double>& targets) {
  require_sweepable(config, targets);
  ExperimentConfig cfg = config;
  cfg.reduction.k.reset();
  cfg.reduction.cev_target = targets.front();
  validate_config(cfg);
  data.validate();
  const std::vector<SplitPlan> plans = plan_splits(cfg, data);

  // records[t][s]
  std::vector<std::vector<SplitRecord>> records(targets.size(),
                                                std::vector<SplitRecord>(plans.size()));
  run_splits(plans.size(), cfg.threads, [&](std::size_t s) {
    const Indices fit_idx = fit_indices(cfg, data, plans[s]);
    const BaseFit base = fit_base(cfg, data, fit_idx);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const std::size_t k = select_k_for_cev(*base.reduction.curve, targets[t]);
      const FittedSplit fitted = finish_fit(cfg, base, fit_idx, k, plans[s].seed);
      records[t][s] = classify_split(cfg, data, plans[s], fitted, s);
    }
  });

  SweepResult result;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    SweepRow row;
    row.target = targets[t];
    std::vector<MetricSet> per_split;
    for (const SplitRecord& rec : records[t]) {
      per_split.push_back(rec.metrics);
      row.chosen_k.push_back(*rec.chosen_k);
      row.accuracies.push_back(rec.metrics.accuracy);
      row.test_digests.push_back(rec.test_digest);
    }
    row.summary = aggregate(per_split);
    row.mean_k = summarize_counts(row.chosen_k).mean;
    result.rows.push_back(std::move(row));
  }
  return result;
}

CevCurve emit_cev_curve(const ExperimentConfig& config) {
  return emit_cev_curve(config, load_experiment_data(config));
}

CevCurve emit_cev_curve(const ExperimentConfig& config, const LabeledFeatureSet& data) {
  const ReductionMethod m = config.reduction.method;
  if (m != ReductionMethod::kPca && m != ReductionMethod::kSvd) {
    throw ConfigError("a CEV curve needs reduction method pca or svd");
  }
  data.validate();
  ExperimentConfig cfg = config;
  cfg.reduction.fit_scope = FitScope::kAllData;
  return *fit_base(cfg, data, all_rows(data.size())).reduction.curve;
}

LabeledFeatureSet reduce_dataset(const ExperimentConfig& config, const LabeledFeatureSet& data) {
  validate_config(config);
  data.validate();
  const Indices every = all_rows(data.size());
  const BaseFit base = fit_base(config, data, every);
  std::optional<std::size_t> k;
  if (config.reduction.method != ReductionMethod::kNone &&
      config.reduction.method != ReductionMethod::kLda) {
    k = k_from_target(base.reduction, config.reduction);
  }
  LabeledFeatureSet out = data;
  out.features = finish_fit(config, base, every, k, config.split.seed).features;
  return out;
}

}  // namespace rdecaf
