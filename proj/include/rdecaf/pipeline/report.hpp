#pragma once

#include "rdecaf/pipeline/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace rdecaf {

/// Value as a percentage with 2 decimals, e.g. 0.91134 -> "91.13".
std::string percent_string(double fraction);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);

/// Pretty-printed JSON followed by a newline.
std::string report_text(const ExperimentReport& report);

/// Per-split, summary and confusion tables.
std::string splits_csv(const ExperimentReport& report);
std::string summary_csv(const ExperimentReport& report);
std::string confusion_csv(const ExperimentReport& report);

/// Writes the JSON report and `<prefix>_splits.csv`, `<prefix>_summary.csv`,
/// `<prefix>_confusion.csv`. An empty prefix uses the report path minus its
/// extension.
void write_report(const ExperimentReport& report, const std::filesystem::path& json_path,
                  const std::string& tables_prefix = {});

std::string sweep_csv(const SweepResult& sweep);
std::string cev_csv(const CevCurve& curve);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rdecaf
