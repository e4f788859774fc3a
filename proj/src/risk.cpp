#include "fairaudit/risk.hpp"

#include <cmath>
#include <map>

#include "fairaudit/error.hpp"

namespace fairaudit {

std::string_view to_string(FairnessMode m) { return m == FairnessMode::Group ? "group" : "individual"; }

double line_weight(std::size_t k, std::size_t total, FairnessMode mode) {
  if (k > total) {
    throw AnalysisError("conditioning feature count " + std::to_string(k) + " exceeds " +
                        std::to_string(total));
  }
  if (mode == FairnessMode::Group) return 1.0 / (1.0 + static_cast<double>(k));
  return (1.0 + static_cast<double>(k)) / (1.0 + static_cast<double>(total));
}

HazardValue hazard(const TestReport& report, FairnessMode mode) {
  HazardValue h;
  h.test = report.sensitive_feature;
  h.target = report.target;
  h.mode = mode;
  if (report.dataset_size == 0) return h;

  const auto total = report.conditioning_columns.size();
  const double n = static_cast<double>(report.dataset_size);
  for (std::size_t j = 0; j < report.lines.size(); ++j) {
    const auto& line = report.lines[j];
    LineContribution c;
    c.line = j;
    if (!line.skipped()) {
      c.violated = line.violated;
      c.share = static_cast<double>(line.union_count) / n;
      c.epsilon = line.epsilon;
      c.distance = std::abs(line.divergence->value - line.epsilon);
      c.weight = line_weight(line.conditions.size(), total, mode);
      if (c.violated) {
        // cbrt(eps) * cbrt(|e|) taken as one root of the product
        c.value = c.share * std::cbrt(c.epsilon * c.distance) * c.weight;
      }
    }
    h.value += c.value;
    h.contributions.push_back(c);
  }
  return h;
}

RiskReport overall_risk(std::vector<HazardValue> hazards) {
  if (hazards.empty()) throw AnalysisError("overall risk needs at least one hazard");
  RiskReport r;
  double sum = 0.0;
  for (const auto& h : hazards) sum += h.value;
  r.overall = sum / static_cast<double>(hazards.size());
  r.hazards = std::move(hazards);
  return r;
}

HazardComparison compare_hazards(const RiskReport& model, const RiskReport& data) {
  std::map<std::pair<std::string, FairnessMode>, double> data_by_key;
  for (const auto& h : data.hazards) data_by_key[{h.test, h.mode}] = h.value;
  if (data_by_key.size() != model.hazards.size()) {
    throw AnalysisError("model and data reports cover different tests");
  }

  HazardComparison cmp;
  for (const auto& h : model.hazards) {
    auto it = data_by_key.find({h.test, h.mode});
    if (it == data_by_key.end()) {
      throw AnalysisError("data report has no '" + h.test + "' " + std::string(to_string(h.mode)) +
                          " hazard");
    }
    cmp.features.push_back({h.test, h.mode, it->second, h.value, h.value - it->second});
  }
  cmp.data_overall = data.overall;
  cmp.model_overall = model.overall;
  cmp.overall_difference = model.overall - data.overall;
  return cmp;
}

BatteryResult run_battery(const Dataset& d, std::span<const Outcome> outcome,
                          const std::vector<SensitiveSpec>& features,
                          const std::vector<std::string>& nonsensitive, const DetectionConfig& config,
                          const std::vector<FairnessMode>& modes, const std::string& target) {
  if (features.empty() || modes.empty()) throw ConfigError("battery needs features and fairness modes");
  BatteryResult result;
  std::vector<HazardValue> hazards;
  for (const auto& feature : features) {
    result.reports.push_back(run_test(d, feature, outcome, nonsensitive, config, target));
    for (auto mode : modes) hazards.push_back(hazard(result.reports.back(), mode));
  }
  result.risk = overall_risk(std::move(hazards));
  return result;
}

}  // namespace fairaudit
