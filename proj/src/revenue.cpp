#include "fairaudit/revenue.hpp"

#include <charconv>

#include "fairaudit/error.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

namespace {

std::vector<double> per_row_rates(const Dataset& d, const RevenueConfig& config) {
  if (!config.interest_rate_column) return std::vector<double>(d.size(), config.interest_rate);
  const auto& col = d.column(*config.interest_rate_column);
  std::vector<double> rates(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& text = col.values[i];
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rates[i]);
    if (ec != std::errc{} || ptr != text.data() + text.size() || rates[i] < 0.0 || rates[i] > 1.0) {
      throw ConfigError("interest rate column '" + col.name + "' row " + std::to_string(i) +
                        ": expected a fraction in [0,1], found '" + text + "'");
    }
  }
  return rates;
}

}  // namespace

void validate(const RevenueConfig& config) {
  if (!(config.interest_rate >= 0.0 && config.interest_rate <= 1.0)) {
    throw ConfigError("interest rate must lie in [0,1]");
  }
  if (!(config.provision_factor >= 0.0 && config.provision_factor <= 1.0)) {
    throw ConfigError("provision factor must lie in [0,1]");
  }
}

BadRate bad_rate(std::span<const Outcome> accepted_labels) {
  BadRate br;
  br.accepted = accepted_labels.size();
  for (auto o : accepted_labels) {
    if (o == Outcome::Bad) ++br.defaults;
  }
  if (br.accepted > 0) br.value = static_cast<double>(br.defaults) / static_cast<double>(br.accepted);
  return br;
}

double provisions(double total_credit, double bad_rate, double provision_factor) {
  return total_credit * bad_rate * provision_factor;
}

double profit(std::span<const double> amounts, std::span<const double> rates, double provisions) {
  if (amounts.size() != rates.size()) throw AnalysisError("amounts and rates differ in length");
  double revenue = 0.0;
  for (std::size_t i = 0; i < amounts.size(); ++i) revenue += amounts[i] * rates[i];
  return revenue - provisions;
}

std::vector<int> threshold_grid(int lo, int hi, int step) {
  if (step <= 0) throw ConfigError("threshold step must be positive");
  if (hi < lo) throw ConfigError("threshold range is empty");
  std::vector<int> grid;
  for (long t = lo; t <= hi; t += step) grid.push_back(static_cast<int>(t));
  return grid;
}

std::vector<SweepRow> sweep(const Dataset& d, std::span<const int> scores, std::span<const int> thresholds,
                            const BatterySettings& battery, const RevenueConfig& revenue) {
  if (thresholds.empty()) throw AnalysisError("threshold grid is empty");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] <= thresholds[i - 1]) throw AnalysisError("thresholds must be ascending");
  }
  if (scores.size() != d.size()) throw AnalysisError("scores do not match dataset size");
  validate(revenue);

  const auto amounts = d.numeric(revenue.credit_amount_column);
  const auto rates = per_row_rates(d, revenue);
  const auto labels = d.outcome();

  const auto data = run_battery(d, labels, battery.features, battery.nonsensitive, battery.detection,
                                battery.modes, "data");

  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (int t : thresholds) {
    SweepRow row;
    row.threshold = t;

    std::vector<Outcome> accepted_labels;
    std::vector<double> earning_amounts, earning_rates;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (scores[i] < t) continue;
      accepted_labels.push_back(labels[i]);
      row.accepted_credit += amounts[i];
      if (labels[i] == Outcome::Good) {
        earning_amounts.push_back(amounts[i]);
        earning_rates.push_back(rates[i]);
      }
    }
    const auto br = bad_rate(accepted_labels);
    row.accepted_count = br.accepted;
    row.bad_rate = br.value;
    if (br.empty()) row.warnings.push_back("no applicant accepted; bad rate set to 0");
    row.provisions = provisions(row.accepted_credit, row.bad_rate, revenue.provision_factor);
    row.profit = profit(earning_amounts, earning_rates, row.provisions);

    const auto model_outcome = classify(scores, t);
    const auto model = run_battery(d, model_outcome, battery.features, battery.nonsensitive,
                                   battery.detection, battery.modes, "model");
    row.model_risk = model.risk.overall;
    row.data_risk = data.risk.overall;
    row.risk_difference = row.model_risk - row.data_risk;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fairaudit
