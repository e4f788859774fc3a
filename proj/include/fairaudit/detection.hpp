#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/divergence.hpp"
#include "fairaudit/tabular.hpp"

namespace fairaudit {

enum class AnalysisMode { VsIdeal, ClassVsClass };

std::string_view to_string(AnalysisMode m);

/// One comparison of a fairness test. A line without a divergence was
/// skipped (empty class, too little support) and carries the reason in
/// `warnings`.
struct TestLine {
  std::vector<Condition> conditions;
  std::vector<std::string> classes;  // compared (sub)classes
  std::vector<std::size_t> class_sizes;
  std::size_t union_count = 0;
  std::optional<DivergenceValue> divergence;
  double epsilon = 0.0;
  bool violated = false;
  std::vector<std::string> warnings;

  bool skipped() const noexcept { return !divergence.has_value(); }
};

struct TestReport {
  std::string sensitive_feature;
  std::string target;  // "model", "data" or a caller-chosen label
  AnalysisMode mode = AnalysisMode::ClassVsClass;
  DivergenceKind divergence_kind = DivergenceKind::JS;
  Aggregation aggregation = Aggregation::Max;
  Rigour rigour = Rigour::High;
  std::size_t dataset_size = 0;
  std::vector<std::string> conditioning_columns;
  std::vector<TestLine> lines;
  std::vector<std::string> warnings;
};

struct DetectionConfig {
  AnalysisMode mode = AnalysisMode::ClassVsClass;
  Rigour rigour = Rigour::High;
  Aggregation aggregation = Aggregation::Max;
  ThresholdConfig thresholds;
  std::size_t depth = 1;
  std::size_t min_support = 10;
};

/// One line per class: kl_normalized(ideal, observed) against the automatic
/// threshold for that class. The default ideal is the outcome distribution
/// pooled over every row of the partition.
std::vector<TestLine> compare_to_ideal(const FeaturePartition& fp, std::span<const Outcome> outcome,
                                       std::size_t dataset_size, Rigour rigour,
                                       const ThresholdConfig& thresholds,
                                       const std::optional<ProbabilityDistribution>& ideal = std::nullopt);

/// JS divergence for every unordered pair of non-empty cells, aggregated into
/// one line.
TestLine compare_classes(const FeaturePartition& fp, std::span<const Outcome> outcome,
                         std::size_t dataset_size, Rigour rigour, Aggregation aggregation,
                         const ThresholdConfig& thresholds);

/// Conditions on every combination of up to `depth` non-sensitive columns and
/// every observed joint value, in declared column order and sorted value order.
std::vector<TestLine> subclass_double_check(const Dataset& d, const SensitiveSpec& sensitive,
                                            const std::vector<std::string>& nonsensitive,
                                            std::span<const Outcome> outcome,
                                            const DetectionConfig& config);

/// Top-level comparison followed by the subclass lines.
TestReport run_test(const Dataset& d, const SensitiveSpec& sensitive, std::span<const Outcome> outcome,
                    const std::vector<std::string>& nonsensitive, const DetectionConfig& config,
                    std::string target = "model");

}  // namespace fairaudit
