#include "oracles.hpp"

#include "rdecaf/error.hpp"
#include "rdecaf/pipeline/config.hpp"
#include "rdecaf/pipeline/experiment.hpp"
#include "rdecaf/pipeline/report.hpp"
#include "rdecaf/pipeline/synthetic.hpp"
#include "rdecaf/reduce/pca.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rdecaf;
using nlohmann::json;

namespace {

LabeledFeatureSet small_fixture(std::uint64_t seed = 3) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.n = 120;
  spec.d_total = 40;
  spec.d_informative = 5;
  return make_synthetic_fixture(spec);
}

ExperimentConfig pca_config(double target = 0.9) {
  ExperimentConfig cfg;
  cfg.reduction.method = ReductionMethod::kPca;
  cfg.reduction.cev_target = target;
  cfg.split.repeats = 4;
  cfg.split.seed = 11;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing is strict") {
  const json good = json::parse(R"({
    "input": {"path": "x.rdcf", "format": "rdcf"},
    "magnifications": [400],
    "reduction": {"method": "pca", "cev_target": 0.15, "fit_scope": "all_data"},
    "classifier": {"C": 5, "kernel": "rbf", "gamma": "scale", "class_weights": "balanced"},
    "split": {"ratio": 0.8, "repeats": 10, "seed": 0}
  })");
  const ExperimentConfig cfg = config_from_json(good);
  CHECK(cfg.reduction.method == ReductionMethod::kPca);
  CHECK(*cfg.reduction.cev_target == 0.15);
  CHECK(cfg.reduction.fit_scope == FitScope::kAllData);
  CHECK(cfg.classifier.weight_mode == ClassWeightMode::kBalanced);
  CHECK(!cfg.classifier.kernel.gamma);
  CHECK(cfg.magnifications == std::vector<std::uint16_t>{400});

  const ExperimentConfig back = config_from_json(json::parse(config_to_json(cfg).dump()));
  CHECK(config_to_json(back) == config_to_json(cfg));

  auto rejects = [&](const char* text) {
    CHECK_THROWS_AS(config_from_json(json::parse(text)), ConfigError);
  };
  rejects(R"({"reduction": {"method": "pca", "cev_target": 0.5, "extra": 1}})");
  rejects(R"({"unknown": true})");
  rejects(R"({"reduction": {"method": "pca"}})");
  rejects(R"({"reduction": {"method": "pca", "cev_target": 0.5, "k": 3}})");
  rejects(R"({"reduction": {"method": "pca", "cev_target": 1.5}})");
  rejects(R"({"reduction": {"method": "lda", "k": 2}})");
  rejects(R"({"reduction": {"method": "umap", "k": 2}})");
  rejects(R"({"classifier": {"C": "five"}})");
  rejects(R"({"classifier": {"C": -1}})");
  rejects(R"({"classifier": {"class_weights": [1, 0]}})");
  rejects(R"({"split": {"ratio": 1.0}})");
  rejects(R"({"split": {"protocol": "bootstrap"}})");
  rejects(R"({"magnifications": [300]})");
  rejects(R"({"threads": 0})");
  rejects(R"({"reduction": {"method": "pca_tsne", "k": 5, "tsne": {"output_dims": 4}}})");
  rejects(R"({"classifier": {"grid_search": {"folds": 1}}})");

  const auto dir = std::filesystem::temp_directory_path() / "rdecaf_tests";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
}

TEST_CASE("test index digest") {
  CHECK(indices_digest({}) == 0xcbf29ce484222325ULL);
  CHECK(indices_digest({1, 2, 3}) == 0xda2bfb225e0d1f05ULL);
  CHECK(indices_digest({1, 2, 3}) != indices_digest({1, 2, 4}));
}

TEST_CASE("synthetic fixture shape") {
  const LabeledFeatureSet s = make_synthetic_fixture({});
  CHECK(s.size() == 400);
  CHECK(s.dims() == 512);
  CHECK(class_counts(s.labels) == std::array<std::size_t, 2>{200, 200});
  CHECK(s.magnifications[0] == 40);
  CHECK(s.magnifications[2] == 100);
  CHECK(s.magnifications[7] == 400);
  CHECK(s.sample_ids[12] == "synth-00012");
  CHECK_NOTHROW(s.validate());
  CHECK(make_synthetic_fixture({}) == s);

  SyntheticSpec bad;
  bad.d_informative = 512;
  CHECK_THROWS_AS(make_synthetic_fixture(bad), DataError);
  bad.d_informative = 0;
  CHECK_THROWS_AS(make_synthetic_fixture(bad), DataError);
}

TEST_CASE("synthetic fixture has a strong leading subspace") {
  // The top 20 standardized components carry most of the variance.
  const LabeledFeatureSet s = make_synthetic_fixture({});
  ExperimentConfig cfg = pca_config(0.95);
  const CevCurve curve = emit_cev_curve(cfg, s);
  CHECK(curve.at(20) >= 0.6);
  CHECK(curve.at(20) == doctest::Approx(0.9528).epsilon(0.01));
}

TEST_CASE("cev curve of three features matches the covariance oracle") {
  Rng rng(9);
  LabeledFeatureSet s;
  s.features = oracle::random_matrix(rng, 30, 3);
  s.features.col(1) += 2.0 * s.features.col(0);
  for (int i = 0; i < 30; ++i) {
    s.labels.push_back(i % 2);
    s.magnifications.push_back(40);
    s.sample_ids.push_back(std::to_string(i));
  }
  ExperimentConfig cfg = pca_config();
  cfg.scale = false;
  const CevCurve curve = emit_cev_curve(cfg, s);
  REQUIRE(curve.k_max() == 3);
  const oracle::EigenPairs e = oracle::jacobi_eigen(oracle::covariance(s.features));
  double acc = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) {
    acc += e.values(static_cast<Eigen::Index>(k - 1)) / e.values.sum();
    CHECK(std::abs(curve.at(k) - acc) < 1e-10);
  }
  cfg.reduction.method = ReductionMethod::kLda;
  cfg.reduction.cev_target.reset();
  cfg.reduction.k = 1;
  CHECK_THROWS_AS(emit_cev_curve(cfg, s), ConfigError);
}

TEST_CASE("identical configuration gives byte-identical reports") {
  const LabeledFeatureSet data = small_fixture();
  ExperimentConfig cfg = pca_config();
  const std::string a = report_text(run_experiment(cfg, data));
  const std::string b = report_text(run_experiment(cfg, data));
  CHECK(a == b);

  // Only the echoed thread count may differ.
  cfg.threads = 3;
  const ExperimentReport threaded = run_experiment(cfg, data);
  CHECK(report_text(threaded) == report_text(run_experiment(cfg, data)));
  auto without_threads = [](nlohmann::ordered_json doc) {
    doc["config"].erase("threads");
    return doc.dump();
  };
  CHECK(without_threads(report_to_json(threaded)) == without_threads(nlohmann::ordered_json::parse(a)));
  CHECK(splits_csv(threaded) == splits_csv(run_experiment(pca_config(), data)));

  cfg.threads = 1;
  cfg.split.seed = 12;
  CHECK(report_text(run_experiment(cfg, data)) != a);
}

TEST_CASE("summary statistics recomputed from the per-split records") {
  const ExperimentReport r = run_experiment(pca_config(), small_fixture());
  REQUIRE(r.splits.size() == 4);
  double mean = 0.0;
  for (const SplitRecord& s : r.splits) mean += s.metrics.accuracy;
  mean /= 4.0;
  double var = 0.0;
  for (const SplitRecord& s : r.splits) var += std::pow(s.metrics.accuracy - mean, 2);
  CHECK(std::abs(r.summary.mean.accuracy - mean) < 1e-12);
  CHECK(std::abs(r.summary.stddev.accuracy - std::sqrt(var / 4.0)) < 1e-12);
  for (const SplitRecord& s : r.splits) {
    CHECK(s.train_size + s.test_size == 120);
    CHECK(s.confusion.total() == s.test_size);
    REQUIRE(s.chosen_k);
    CHECK(*s.cev_reached >= 0.9);
  }
  CHECK(r.chosen_k);
  CHECK(r.caveats.empty());
}

TEST_CASE("every reduction sees the same test partitions") {
  const LabeledFeatureSet data = small_fixture();
  ExperimentConfig base = pca_config();
  const ExperimentReport pca = run_experiment(base, data);

  ExperimentConfig none = base;
  none.reduction.method = ReductionMethod::kNone;
  none.reduction.cev_target.reset();
  ExperimentConfig lda = none;
  lda.reduction.method = ReductionMethod::kLda;
  lda.reduction.k = 1;
  ExperimentConfig svd = base;
  svd.reduction.method = ReductionMethod::kSvd;
  ExperimentConfig kpca = base;
  kpca.reduction.method = ReductionMethod::kKpca;

  for (const ExperimentConfig& cfg : {none, lda, svd, kpca}) {
    const ExperimentReport other = run_experiment(cfg, data);
    REQUIRE(other.splits.size() == pca.splits.size());
    for (std::size_t i = 0; i < pca.splits.size(); ++i) {
      CHECK(other.splits[i].test_digest == pca.splits[i].test_digest);
    }
  }
  const ExperimentReport kr = run_experiment(kpca, data);
  CHECK(kr.caveats.size() == 1);
}

TEST_CASE("train-only fitting ignores the test rows") {
  const LabeledFeatureSet data = small_fixture();
  ExperimentConfig cfg = pca_config();
  const SplitPlan plan = plan_splits(cfg, data).front();

  LabeledFeatureSet perturbed = data;
  Rng rng(1);
  for (std::size_t i : plan.test_indices) {
    for (Eigen::Index j = 0; j < perturbed.features.cols(); ++j) {
      perturbed.features(static_cast<Eigen::Index>(i), j) = 100.0 * rng.normal();
    }
  }

  const FittedSplit a = fit_split_models(cfg, data, plan);
  const FittedSplit b = fit_split_models(cfg, perturbed, plan);
  CHECK(a.scaler->mean == b.scaler->mean);
  CHECK(a.scaler->stddev == b.scaler->stddev);
  CHECK(a.reduction.pca->components == b.reduction.pca->components);
  CHECK(a.reduction.pca->explained_variance == b.reduction.pca->explained_variance);
  CHECK(a.rescaler->mean == b.rescaler->mean);
  CHECK(a.rescaler->stddev == b.rescaler->stddev);
  CHECK(a.chosen_k == b.chosen_k);
  for (std::size_t i : plan.train_indices) {
    CHECK(a.features.row(static_cast<Eigen::Index>(i)) == b.features.row(static_cast<Eigen::Index>(i)));
  }

  // The same perturbation does reach an all-data fit.
  cfg.reduction.fit_scope = FitScope::kAllData;
  const FittedSplit c = fit_split_models(cfg, data, plan);
  const FittedSplit d = fit_split_models(cfg, perturbed, plan);
  CHECK(c.scaler->mean != d.scaler->mean);
  CHECK(run_experiment(cfg, data).caveats.size() == 1);
}

TEST_CASE("paired cev sweep") {
  const LabeledFeatureSet data = small_fixture();
  ExperimentConfig cfg = pca_config();
  const std::vector<double> targets{0.3, 0.6, 0.9, 1.0};
  const SweepResult sweep = sweep_cev(cfg, data, targets);
  REQUIRE(sweep.rows.size() == 4);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    CHECK(sweep.rows[t].test_digests == sweep.rows[0].test_digests);
    if (t > 0) {
      for (std::size_t i = 0; i < sweep.rows[t].chosen_k.size(); ++i) {
        CHECK(sweep.rows[t].chosen_k[i] >= sweep.rows[t - 1].chosen_k[i]);
      }
    }
  }

  cfg.reduction.cev_target = 0.6;
  const ExperimentReport single = run_experiment(cfg, data);
  for (std::size_t i = 0; i < single.splits.size(); ++i) {
    CHECK(single.splits[i].metrics.accuracy == sweep.rows[1].accuracies[i]);
    CHECK(*single.splits[i].chosen_k == sweep.rows[1].chosen_k[i]);
    CHECK(single.splits[i].test_digest == sweep.rows[1].test_digests[i]);
  }
  CHECK(sweep.rows[1].summary.mean.accuracy == single.summary.mean.accuracy);

  CHECK_THROWS_AS(sweep_cev(cfg, data, {}), ConfigError);
  CHECK_THROWS_AS(sweep_cev(cfg, data, {0.0}), ConfigError);
  ExperimentConfig lda = cfg;
  lda.reduction.method = ReductionMethod::kLda;
  lda.reduction.cev_target.reset();
  lda.reduction.k = 1;
  CHECK_THROWS_AS(sweep_cev(lda, data, {0.5}), ConfigError);
}

TEST_CASE("full-rank pca without rescaling keeps the geometry") {
  // Rotation onto every component preserves distances and total variance,
  // so the rbf "scale" bandwidth and the SVM problem are unchanged.
  const LabeledFeatureSet data = small_fixture();
  ExperimentConfig cfg = pca_config(1.0);
  cfg.reduction.rescale_reduced = false;
  const ExperimentReport full = run_experiment(cfg, data);
  const SweepRow top = sweep_cev(cfg, data, {1.0}).rows.front();
  for (std::size_t i = 0; i < full.splits.size(); ++i) {
    ExperimentConfig fixed = cfg;
    fixed.reduction.cev_target.reset();
    fixed.reduction.k = top.chosen_k[i];
    const ExperimentReport at_rank = run_experiment(fixed, data);
    CHECK(at_rank.splits[i].metrics.accuracy == top.accuracies[i]);
  }
  cfg.reduction.method = ReductionMethod::kNone;
  cfg.reduction.cev_target.reset();
  const ExperimentReport none = run_experiment(cfg, data);
  for (std::size_t i = 0; i < full.splits.size(); ++i) {
    CHECK(*full.splits[i].chosen_k >= 40);
    CHECK(std::abs(full.splits[i].metrics.accuracy - none.splits[i].metrics.accuracy) <=
          1.0 / static_cast<double>(full.splits[i].test_size) + 1e-12);
  }
}

TEST_CASE("pca then tsne runs and flags the joint embedding") {
  ExperimentConfig cfg = pca_config();
  cfg.reduction.method = ReductionMethod::kPcaTsne;
  cfg.split.repeats = 2;
  const ExperimentReport r = run_experiment(cfg, small_fixture());
  CHECK(r.splits.size() == 2);
  CHECK(r.caveats.size() == 1);
  CHECK(r.summary.mean.accuracy > 0.5);
}

TEST_CASE("stratified k-fold protocol and grid search") {
  ExperimentConfig cfg = pca_config();
  cfg.split.protocol = SplitProtocol::kStratifiedKfold;
  cfg.split.folds = 3;
  GridSearchSpec grid;
  grid.kernels = {KernelKind::kRbf};
  grid.c_values = {1.0, 10.0};
  grid.gammas = {std::nullopt};
  grid.folds = 3;
  cfg.classifier.grid_search = grid;
  const ExperimentReport r = run_experiment(cfg, small_fixture());
  REQUIRE(r.splits.size() == 3);
  std::size_t tested = 0;
  for (const SplitRecord& s : r.splits) {
    tested += s.test_size;
    CHECK((s.c == 1.0 || s.c == 10.0));
  }
  CHECK(tested == 120);
}

TEST_CASE("failures name the split") {
  ExperimentConfig cfg = pca_config();
  cfg.reduction.cev_target.reset();
  cfg.reduction.k = 500;
  try {
    run_experiment(cfg, small_fixture());
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).rfind("split 0: ", 0) == 0);
  }
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "rdecaf_tests" / "report";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg = pca_config();
  const ExperimentReport r = run_experiment(cfg, small_fixture());
  write_report(r, dir / "run.json");
  const json doc = json::parse(slurp(dir / "run.json"));
  CHECK(doc.at("splits").size() == 4);
  CHECK(doc.at("config") == json::parse(config_to_json(cfg).dump()));
  CHECK_FALSE(doc.at("splits")[0].contains("wall_seconds"));
  CHECK(std::filesystem::exists(dir / "run_splits.csv"));
  CHECK(std::filesystem::exists(dir / "run_summary.csv"));
  CHECK(std::filesystem::exists(dir / "run_confusion.csv"));
  CHECK(slurp(dir / "run.json") == report_text(r));

  CHECK(percent_string(0.91134) == "91.13");
  CevCurve c{{0.5, 1.0}};
  CHECK(cev_csv(c) == "k,cev\n1,0.5\n2,1\n");
}
