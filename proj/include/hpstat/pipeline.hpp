#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hpstat/analysis.hpp"
#include "hpstat/permtest.hpp"
#include "hpstat/proximity.hpp"

namespace hpstat {

/// Representation files of one layer, keyed by (model state, data split).
struct LayerFiles {
  std::string name;
  std::map<std::pair<ModelState, DataSplit>, std::filesystem::path> files;
};

/// Parsed `analyze` configuration; see docs/config.md for the file format.
struct AnalysisConfig {
  std::vector<LayerFiles> layers;
  /// Optional per-split label files overriding labels embedded in the data.
  std::map<DataSplit, std::filesystem::path> labels;
  Metric metric;
  /// Rows drawn per class before any statistic; 0 keeps every row.
  Index per_class = 1000;
  std::uint64_t subsample_seed = 0;
  bool permute_labels = false;
  std::uint64_t permute_seed = 0;
  std::vector<TestKind> tests;
  std::vector<std::pair<std::string, std::string>> spans;
  std::vector<DataSplit> span_splits{DataSplit::Train};
  TestSpec spec;
  std::optional<std::filesystem::path> report_csv;
  std::optional<std::filesystem::path> report_json;
  std::optional<std::filesystem::path> matrices_json;
};

/// Relative paths are resolved against `base_dir`.
AnalysisConfig parse_analysis_config_text(const std::string& text,
                                          const std::filesystem::path& base_dir);
AnalysisConfig parse_analysis_config(const std::filesystem::path& path);

struct AnalysisOutput {
  LayerAnalysis analysis;
  std::vector<TestReport> reports;
};

/// Loads every listed representation, computes each distinct pairwise matrix
/// once, runs the requested tests and writes the configured outputs.
AnalysisOutput run_analysis(const AnalysisConfig& config);

}  // namespace hpstat
