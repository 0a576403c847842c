#pragma once

#include "rdecaf/types.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace rdecaf {

/// Binary confusion counts; the positive class is malignant (label 1).
struct ConfusionMatrix {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;

  std::size_t total() const noexcept { return tn + fp + fn + tp; }
  /// Rows = true class, columns = predicted class, each row in percent.
  std::array<std::array<double, 2>, 2> row_percentages() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when the metric was 0/0 and reported as 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

struct MetricSummary {
  MetricSet mean;
  MetricSet stddev;  // population std
  std::size_t count = 0;
};

ConfusionMatrix confusion(const Labels& y_true, const Labels& y_pred);

MetricSet metrics(const ConfusionMatrix& cm);

/// Mean and population std of each metric. Throws on an empty list.
MetricSummary aggregate(const std::vector<MetricSet>& per_split);

/// tn / (tn + fp): the benign row of a normalized confusion matrix.
double benign_recall(const ConfusionMatrix& cm);

double f1_from(double precision, double recall);

}  // namespace rdecaf
