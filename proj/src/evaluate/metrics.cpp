#include "rdecaf/evaluate/metrics.hpp"

#include "rdecaf/error.hpp"

#include <cmath>
#include <string>

namespace rdecaf {
namespace {

double ratio_or_zero(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

std::array<std::array<double, 2>, 2> ConfusionMatrix::row_percentages() const {
  return {{{percent(tn, tn + fp), percent(fp, tn + fp)}, {percent(fn, fn + tp), percent(tp, fn + tp)}}};
}

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) throw DataError("confusion: length mismatch");
  if (y_true.empty()) throw DataError("confusion: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != kBenign && t != kMalignant) || (p != kBenign && p != kMalignant)) {
      throw DataError("confusion: invalid label at position " + std::to_string(i));
    }
    if (t == kMalignant) {
      (p == kMalignant ? cm.tp : cm.fn) += 1;
    } else {
      (p == kMalignant ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

double f1_from(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

MetricSet metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("metrics: empty confusion matrix");
  MetricSet m;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  m.precision = ratio_or_zero(cm.tp, cm.tp + cm.fp, m.precision_degenerate);
  m.recall = ratio_or_zero(cm.tp, cm.tp + cm.fn, m.recall_degenerate);
  m.f1_degenerate = m.precision + m.recall == 0.0;
  m.f1 = f1_from(m.precision, m.recall);
  return m;
}

MetricSummary aggregate(const std::vector<MetricSet>& per_split) {
  if (per_split.empty()) throw DataError("aggregate: no metric sets");
  const auto n = static_cast<double>(per_split.size());
  MetricSummary out;
  out.count = per_split.size();

  auto summarize = [&](double MetricSet::*field, double& mean, double& sd) {
    double sum = 0.0;
    for (const MetricSet& m : per_split) sum += m.*field;
    mean = sum / n;
    double ss = 0.0;
    for (const MetricSet& m : per_split) ss += (m.*field - mean) * (m.*field - mean);
    sd = std::sqrt(ss / n);
  };
  summarize(&MetricSet::accuracy, out.mean.accuracy, out.stddev.accuracy);
  summarize(&MetricSet::precision, out.mean.precision, out.stddev.precision);
  summarize(&MetricSet::recall, out.mean.recall, out.stddev.recall);
  summarize(&MetricSet::f1, out.mean.f1, out.stddev.f1);
  return out;
}

double benign_recall(const ConfusionMatrix& cm) {
  if (cm.tn + cm.fp == 0) throw DataError("benign_recall: no benign samples");
  return static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

}  // namespace rdecaf
