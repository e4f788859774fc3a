#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairaudit/risk.hpp"

namespace fairaudit {

struct RevenueConfig {
  std::string credit_amount_column = "Attribute5";
  double interest_rate = 0.05;                      // flat IR
  std::optional<std::string> interest_rate_column;  // per-row IR, fractions in [0,1]
  double provision_factor = 0.2;
};

void validate(const RevenueConfig& config);

struct BadRate {
  std::size_t accepted = 0;
  std::size_t defaults = 0;
  double value = 0.0;  // 0 when nothing was accepted
  bool empty() const noexcept { return accepted == 0; }
};

/// Share of defaults among the labels of accepted applicants.
BadRate bad_rate(std::span<const Outcome> accepted_labels);

/// total accepted credit * bad rate * provision factor
double provisions(double total_credit, double bad_rate, double provision_factor);

/// Interest over accepted, non-defaulting rows minus provisions.
double profit(std::span<const double> amounts, std::span<const double> rates, double provisions);

struct SweepRow {
  int threshold = 0;
  std::size_t accepted_count = 0;
  double accepted_credit = 0.0;
  double bad_rate = 0.0;
  double provisions = 0.0;
  double profit = 0.0;
  double model_risk = 0.0;
  double data_risk = 0.0;
  double risk_difference = 0.0;
  std::vector<std::string> warnings;
};

/// Settings for the risk battery run at every threshold.
struct BatterySettings {
  std::vector<SensitiveSpec> features;
  std::vector<std::string> nonsensitive;
  DetectionConfig detection;
  std::vector<FairnessMode> modes{FairnessMode::Group, FairnessMode::Individual};
};

/// Evaluates revenue and model-minus-data risk for each threshold, in the
/// given (ascending) order. The data risk is computed once.
std::vector<SweepRow> sweep(const Dataset& d, std::span<const int> scores, std::span<const int> thresholds,
                            const BatterySettings& battery, const RevenueConfig& revenue);

/// lo, lo + step, ..., up to and including hi when reachable.
std::vector<int> threshold_grid(int lo, int hi, int step);

}  // namespace fairaudit
