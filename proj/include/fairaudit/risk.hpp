#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/detection.hpp"

namespace fairaudit {

enum class FairnessMode { Group, Individual };

std::string_view to_string(FairnessMode m);

/// Group: 1 / (1 + k). Individual: (1 + k) / (1 + K). k is the number of
/// non-sensitive features fixing the subclass, K the number selected.
double line_weight(std::size_t k, std::size_t total, FairnessMode mode);

struct LineContribution {
  std::size_t line = 0;  // index into TestReport::lines
  bool violated = false;
  double share = 0.0;     // q: union count over dataset size
  double epsilon = 0.0;
  double distance = 0.0;  // |divergence - epsilon|
  double weight = 0.0;
  double value = 0.0;
};

struct HazardValue {
  std::string test;    // sensitive feature
  std::string target;  // model / data
  FairnessMode mode = FairnessMode::Group;
  double value = 0.0;
  std::vector<LineContribution> contributions;
};

/// Sum over lines of delta * q * cbrt(epsilon) * cbrt(|e|) * w; skipped lines
/// and lines within threshold contribute zero.
HazardValue hazard(const TestReport& report, FairnessMode mode);

struct RiskReport {
  std::vector<HazardValue> hazards;
  double overall = 0.0;
};

/// Arithmetic mean of the hazard values.
RiskReport overall_risk(std::vector<HazardValue> hazards);

struct FeatureComparison {
  std::string feature;
  FairnessMode mode = FairnessMode::Group;
  double data_hazard = 0.0;
  double model_hazard = 0.0;
  double difference = 0.0;  // model - data
};

struct HazardComparison {
  std::vector<FeatureComparison> features;
  double data_overall = 0.0;
  double model_overall = 0.0;
  double overall_difference = 0.0;  // model - data
};

/// Pairs hazards by (feature, mode); both reports must cover the same tests.
HazardComparison compare_hazards(const RiskReport& model, const RiskReport& data);

/// Reports plus risk for a set of sensitive features under each fairness mode.
struct BatteryResult {
  std::vector<TestReport> reports;
  RiskReport risk;
};

BatteryResult run_battery(const Dataset& d, std::span<const Outcome> outcome,
                          const std::vector<SensitiveSpec>& features,
                          const std::vector<std::string>& nonsensitive, const DetectionConfig& config,
                          const std::vector<FairnessMode>& modes, const std::string& target);

}  // namespace fairaudit
