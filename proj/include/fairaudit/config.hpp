#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/detection.hpp"
#include "fairaudit/revenue.hpp"
#include "fairaudit/risk.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

enum class DatasetFormat { GermanCredit, Csv };

struct DatasetConfig {
  std::filesystem::path path = "data/german.data";
  DatasetFormat format = DatasetFormat::GermanCredit;
  CsvOptions csv;
};

struct SweepGrid {
  int from = 300;
  int to = 800;
  int step = 10;
};

/// Everything a run needs. Defaults reproduce the German Credit audit setup:
/// sensitive gender/age/nationality, conditioning on Attribute1, 3, 6, 10, 12
/// and 14, high rigour, JS with max aggregation, both fairness modes.
struct AuditConfig {
  static constexpr int kVersion = 1;

  DatasetConfig dataset;
  std::vector<std::string> sensitive_features{"gender", "age", "nationality"};
  std::vector<std::string> conditioning_columns{"Attribute1",  "Attribute3",  "Attribute6",
                                                "Attribute10", "Attribute12", "Attribute14"};
  DetectionConfig detection;
  std::vector<FairnessMode> fairness_modes{FairnessMode::Group, FairnessMode::Individual};
  ScorecardConfig scorecard;
  double score_threshold = 550.0;
  RevenueConfig revenue;
  SweepGrid sweep;
  std::filesystem::path output_dir = "out";
};

/// Parses a JSON config. Missing keys keep their defaults; unknown keys and
/// out-of-range values raise ConfigError.
AuditConfig config_from_json(const nlohmann::json& j);
AuditConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const AuditConfig& config);

/// Numeric bounds only; column references are checked against a dataset by
/// check_columns.
void validate(const AuditConfig& config);

/// Every referenced column must exist in `d`, and every sensitive feature
/// must resolve. Revenue columns are only checked when `revenue` is set.
void check_columns(const AuditConfig& config, const Dataset& d, bool revenue = false);

/// Loads the configured dataset and, for German Credit, derives the
/// sensitive columns.
Dataset load_dataset(const AuditConfig& config);

std::vector<SensitiveSpec> resolve_features(const AuditConfig& config, const Dataset& d);

Rigour parse_rigour(const std::string& s);
Aggregation parse_aggregation(const std::string& s);
AnalysisMode parse_analysis_mode(const std::string& s);
FairnessMode parse_fairness_mode(const std::string& s);

}  // namespace fairaudit
