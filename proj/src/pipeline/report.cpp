#include "rdecaf/pipeline/report.hpp"

#include "detail/byte_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace rdecaf {
namespace {

using ojson = nlohmann::ordered_json;

std::string number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
  return buf.data();
}

ojson metric_json(const MetricSet& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"precision_degenerate", m.precision_degenerate},
          {"recall_degenerate", m.recall_degenerate},
          {"f1_degenerate", m.f1_degenerate}};
}

ojson confusion_json(const ConfusionMatrix& cm) {
  const auto pct = cm.row_percentages();
  return {{"tn", cm.tn},
          {"fp", cm.fp},
          {"fn", cm.fn},
          {"tp", cm.tp},
          {"row_percent", {{"benign", {pct[0][0], pct[0][1]}}, {"malignant", {pct[1][0], pct[1][1]}}}}};
}

template <typename T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

std::string prefix_for(const std::filesystem::path& json_path, const std::string& tables_prefix) {
  if (!tables_prefix.empty()) return tables_prefix;
  std::filesystem::path p = json_path;
  p.replace_extension();
  return p.string();
}

constexpr std::array<const char*, 4> kMetricNames{"accuracy", "precision", "recall", "f1"};

std::array<double, 4> metric_values(const MetricSet& m) {
  return {m.accuracy, m.precision, m.recall, m.f1};
}

}  // namespace

std::string percent_string(double fraction) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", 100.0 * fraction);
  return buf.data();
}

ojson report_to_json(const ExperimentReport& report) {
  ojson doc;
  doc["toolkit"] = {{"name", kToolkitName}, {"version", kToolkitVersion}};
  doc["seed"] = report.config.split.seed;
  doc["config"] = config_to_json(report.config);
  doc["data"] = {{"samples", report.samples},
                 {"benign", report.benign},
                 {"malignant", report.malignant},
                 {"dims", report.dims}};

  ojson splits = ojson::array();
  for (const SplitRecord& rec : report.splits) {
    ojson s;
    s["index"] = rec.index;
    s["train_size"] = rec.train_size;
    s["test_size"] = rec.test_size;
    s["test_digest"] = hex64(rec.test_digest);
    s["chosen_k"] = opt(rec.chosen_k);
    s["cev_reached"] = opt(rec.cev_reached);
    s["metrics"] = metric_json(rec.metrics);
    s["confusion"] = confusion_json(rec.confusion);
    s["benign_recall"] = opt(rec.benign_recall);
    s["classifier"] = {{"kernel", to_string(rec.kernel.kind)},
                       {"gamma", rec.kernel.gamma},
                       {"C", rec.c},
                       {"support_vectors", rec.support_vectors},
                       {"converged", rec.svm_converged}};
    if (report.config.output.include_timing) s["wall_seconds"] = rec.wall_seconds;
    splits.push_back(std::move(s));
  }
  doc["splits"] = std::move(splits);

  ojson summary;
  summary["count"] = report.summary.count;
  summary["mean"] = metric_json(report.summary.mean);
  summary["stddev"] = metric_json(report.summary.stddev);
  ojson pct;
  const auto means = metric_values(report.summary.mean);
  const auto stds = metric_values(report.summary.stddev);
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    pct[kMetricNames[m]] = percent_string(means[m]) + "±" + percent_string(stds[m]);
  }
  summary["percent"] = std::move(pct);
  if (report.chosen_k) {
    summary["chosen_k"] = {{"mean", report.chosen_k->mean},
                           {"stddev", report.chosen_k->stddev},
                           {"min", report.chosen_k->min},
                           {"max", report.chosen_k->max}};
  } else {
    summary["chosen_k"] = nullptr;
  }
  doc["summary"] = std::move(summary);
  doc["caveats"] = report.caveats;
  return doc;
}

std::string report_text(const ExperimentReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string splits_csv(const ExperimentReport& report) {
  std::string out =
      "split,train_size,test_size,chosen_k,cev_reached,accuracy,precision,recall,f1,benign_recall,"
      "kernel,gamma,C\n";
  for (const SplitRecord& rec : report.splits) {
    out += std::to_string(rec.index) + ',' + std::to_string(rec.train_size) + ',' +
           std::to_string(rec.test_size) + ',';
    out += (rec.chosen_k ? std::to_string(*rec.chosen_k) : std::string()) + ',';
    out += (rec.cev_reached ? number(*rec.cev_reached) : std::string()) + ',';
    for (double v : metric_values(rec.metrics)) out += number(v) + ',';
    out += (rec.benign_recall ? number(*rec.benign_recall) : std::string()) + ',';
    out += std::string(to_string(rec.kernel.kind)) + ',' + number(rec.kernel.gamma) + ',' +
           number(rec.c) + '\n';
  }
  return out;
}

std::string summary_csv(const ExperimentReport& report) {
  std::string out = "metric,mean,stddev,percent\n";
  const auto means = metric_values(report.summary.mean);
  const auto stds = metric_values(report.summary.stddev);
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    out += std::string(kMetricNames[m]) + ',' + number(means[m]) + ',' + number(stds[m]) + ',' +
           percent_string(means[m]) + "±" + percent_string(stds[m]) + '\n';
  }
  return out;
}

std::string confusion_csv(const ExperimentReport& report) {
  std::string out = "split,tn,fp,fn,tp,benign_as_benign_pct,benign_as_malignant_pct,"
                    "malignant_as_benign_pct,malignant_as_malignant_pct\n";
  for (const SplitRecord& rec : report.splits) {
    const ConfusionMatrix& cm = rec.confusion;
    const auto pct = cm.row_percentages();
    out += std::to_string(rec.index) + ',' + std::to_string(cm.tn) + ',' + std::to_string(cm.fp) +
           ',' + std::to_string(cm.fn) + ',' + std::to_string(cm.tp);
    for (const auto& row : pct) {
      for (double v : row) out += ',' + number(v);
    }
    out += '\n';
  }
  return out;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& json_path,
                  const std::string& tables_prefix) {
  write_text_file(json_path, report_text(report));
  const std::string prefix = prefix_for(json_path, tables_prefix);
  write_text_file(prefix + "_splits.csv", splits_csv(report));
  write_text_file(prefix + "_summary.csv", summary_csv(report));
  write_text_file(prefix + "_confusion.csv", confusion_csv(report));
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "target,mean_k,mean_accuracy,std_accuracy\n";
  for (const SweepRow& row : sweep.rows) {
    out += number(row.target) + ',' + number(row.mean_k) + ',' +
           number(row.summary.mean.accuracy) + ',' + number(row.summary.stddev.accuracy) + '\n';
  }
  return out;
}

std::string cev_csv(const CevCurve& curve) {
  std::string out = "k,cev\n";
  for (std::size_t k = 1; k <= curve.k_max(); ++k) {
    out += std::to_string(k) + ',' + number(curve.at(k)) + '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  detail::write_file(path, text);
}

}  // namespace rdecaf
