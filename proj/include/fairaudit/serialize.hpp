#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/revenue.hpp"
#include "fairaudit/risk.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

using ojson = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

/// Fixed-point text with `digits` decimals, used for the *_display fields.
std::string display(double value, int digits = 5);

ojson to_json(const Scorecard& sc);
Scorecard scorecard_from_json(const nlohmann::json& j);

ojson to_json(const ScoreMetrics& m);
ojson to_json(const TestLine& line);
ojson to_json(const TestReport& report);
ojson to_json(const HazardValue& h);
ojson to_json(const RiskReport& r);
RiskReport risk_report_from_json(const nlohmann::json& j);
ojson to_json(const HazardComparison& c);
ojson to_json(const SweepRow& row);
ojson sweep_to_json(const std::vector<SweepRow>& rows);

/// Pretty-printed, newline-terminated; throws IoError on failure.
void write_json(const std::filesystem::path& path, const ojson& j);
nlohmann::json read_json(const std::filesystem::path& path);

struct ScoreEntry {
  std::size_t row_id = 0;
  int score = 0;
  Outcome decision = Outcome::Good;
};

/// row_id,score,decision with decision Good/Bad at `threshold`.
void write_scores_csv(const std::filesystem::path& path, std::span<const int> scores, double threshold);
std::vector<ScoreEntry> read_scores_csv(const std::filesystem::path& path);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace fairaudit
