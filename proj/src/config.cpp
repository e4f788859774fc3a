#include "fairaudit/config.hpp"

#include <fstream>
#include <set>

#include "fairaudit/error.hpp"

namespace fairaudit {

using nlohmann::json;

namespace {

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

ThresholdInterval read_interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(where + " must be a [lower, upper] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Rigour parse_rigour(const std::string& s) {
  if (s == "high") return Rigour::High;
  if (s == "low") return Rigour::Low;
  throw ConfigError("rigour must be 'high' or 'low', got '" + s + "'");
}

Aggregation parse_aggregation(const std::string& s) {
  if (s == "max") return Aggregation::Max;
  if (s == "min") return Aggregation::Min;
  if (s == "mean") return Aggregation::Mean;
  throw ConfigError("aggregation must be max, min or mean, got '" + s + "'");
}

AnalysisMode parse_analysis_mode(const std::string& s) {
  if (s == "class_vs_class") return AnalysisMode::ClassVsClass;
  if (s == "vs_ideal") return AnalysisMode::VsIdeal;
  throw ConfigError("analysis must be 'class_vs_class' or 'vs_ideal', got '" + s + "'");
}

FairnessMode parse_fairness_mode(const std::string& s) {
  if (s == "group") return FairnessMode::Group;
  if (s == "individual") return FairnessMode::Individual;
  throw ConfigError("fairness mode must be 'group' or 'individual', got '" + s + "'");
}

AuditConfig config_from_json(const json& j) {
  allow_keys(j, "config",
             {"version", "dataset", "sensitive_features", "conditioning_columns", "detection",
              "fairness_modes", "scorecard", "score_threshold", "revenue", "sweep", "output_dir"});
  AuditConfig c;
  int version = AuditConfig::kVersion;
  read(j, "version", version, "config");
  if (version != AuditConfig::kVersion) {
    throw ConfigError("unsupported config version " + std::to_string(version));
  }

  if (j.contains("dataset")) {
    const auto& ds = j["dataset"];
    allow_keys(ds, "dataset", {"path", "format", "outcome_column", "good_value", "bad_value"});
    std::string path = c.dataset.path.string();
    std::string format = "german";
    read(ds, "path", path, "dataset");
    read(ds, "format", format, "dataset");
    c.dataset.path = path;
    if (format == "german") {
      c.dataset.format = DatasetFormat::GermanCredit;
    } else if (format == "csv") {
      c.dataset.format = DatasetFormat::Csv;
    } else {
      throw ConfigError("dataset.format must be 'german' or 'csv', got '" + format + "'");
    }
    read(ds, "outcome_column", c.dataset.csv.outcome_column, "dataset");
    read(ds, "good_value", c.dataset.csv.good_value, "dataset");
    read(ds, "bad_value", c.dataset.csv.bad_value, "dataset");
  }

  read(j, "sensitive_features", c.sensitive_features, "config");
  read(j, "conditioning_columns", c.conditioning_columns, "config");

  if (j.contains("detection")) {
    const auto& dj = j["detection"];
    allow_keys(dj, "detection",
               {"analysis", "rigour", "aggregation", "threshold_intervals", "class_reference",
                "min_support", "subclass_depth"});
    auto& det = c.detection;
    std::string s;
    if (dj.contains("analysis")) {
      read(dj, "analysis", s, "detection");
      det.mode = parse_analysis_mode(s);
    }
    if (dj.contains("rigour")) {
      read(dj, "rigour", s, "detection");
      det.rigour = parse_rigour(s);
    }
    if (dj.contains("aggregation")) {
      read(dj, "aggregation", s, "detection");
      det.aggregation = parse_aggregation(s);
    }
    if (dj.contains("threshold_intervals")) {
      const auto& ti = dj["threshold_intervals"];
      allow_keys(ti, "detection.threshold_intervals", {"high", "low"});
      if (ti.contains("high")) det.thresholds.high = read_interval(ti["high"], "threshold_intervals.high");
      if (ti.contains("low")) det.thresholds.low = read_interval(ti["low"], "threshold_intervals.low");
    }
    read(dj, "class_reference", det.thresholds.class_reference, "detection");
    read(dj, "min_support", det.min_support, "detection");
    read(dj, "subclass_depth", det.depth, "detection");
  }

  if (j.contains("fairness_modes")) {
    std::vector<std::string> modes;
    read(j, "fairness_modes", modes, "config");
    c.fairness_modes.clear();
    for (const auto& m : modes) c.fairness_modes.push_back(parse_fairness_mode(m));
  }

  if (j.contains("scorecard")) {
    const auto& sj = j["scorecard"];
    allow_keys(sj, "scorecard",
               {"columns", "max_prebins", "min_bin_fraction", "smoothing", "learning_rate", "iterations",
                "tolerance", "pdo", "base_score", "base_odds"});
    auto& sc = c.scorecard;
    read(sj, "columns", sc.columns, "scorecard");
    read(sj, "max_prebins", sc.binning.max_prebins, "scorecard");
    read(sj, "min_bin_fraction", sc.binning.min_bin_fraction, "scorecard");
    read(sj, "smoothing", sc.binning.smoothing, "scorecard");
    read(sj, "learning_rate", sc.learning_rate, "scorecard");
    read(sj, "iterations", sc.iterations, "scorecard");
    read(sj, "tolerance", sc.tolerance, "scorecard");
    read(sj, "pdo", sc.scaling.pdo, "scorecard");
    read(sj, "base_score", sc.scaling.base_score, "scorecard");
    read(sj, "base_odds", sc.scaling.base_odds, "scorecard");
  }

  read(j, "score_threshold", c.score_threshold, "config");

  if (j.contains("revenue")) {
    const auto& rj = j["revenue"];
    allow_keys(rj, "revenue", {"credit_amount_column", "interest_rate", "interest_rate_column", "provision_factor"});
    read(rj, "credit_amount_column", c.revenue.credit_amount_column, "revenue");
    read(rj, "interest_rate", c.revenue.interest_rate, "revenue");
    read(rj, "provision_factor", c.revenue.provision_factor, "revenue");
    if (rj.contains("interest_rate_column") && !rj["interest_rate_column"].is_null()) {
      std::string col;
      read(rj, "interest_rate_column", col, "revenue");
      c.revenue.interest_rate_column = col;
    }
  }

  if (j.contains("sweep")) {
    const auto& wj = j["sweep"];
    allow_keys(wj, "sweep", {"from", "to", "step"});
    read(wj, "from", c.sweep.from, "sweep");
    read(wj, "to", c.sweep.to, "sweep");
    read(wj, "step", c.sweep.step, "sweep");
  }

  std::string out = c.output_dir.string();
  read(j, "output_dir", out, "config");
  c.output_dir = out;

  validate(c);
  return c;
}

AuditConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return config_from_json(j);
}

nlohmann::ordered_json to_json(const AuditConfig& c) {
  nlohmann::ordered_json j;
  j["version"] = AuditConfig::kVersion;
  j["dataset"] = {{"path", c.dataset.path.string()},
                  {"format", c.dataset.format == DatasetFormat::GermanCredit ? "german" : "csv"},
                  {"outcome_column", c.dataset.csv.outcome_column},
                  {"good_value", c.dataset.csv.good_value},
                  {"bad_value", c.dataset.csv.bad_value}};
  j["sensitive_features"] = c.sensitive_features;
  j["conditioning_columns"] = c.conditioning_columns;
  const auto& t = c.detection.thresholds;
  j["detection"] = {
      {"analysis", to_string(c.detection.mode)},
      {"rigour", to_string(c.detection.rigour)},
      {"aggregation", to_string(c.detection.aggregation)},
      {"threshold_intervals",
       {{"high", {t.high.lower, t.high.upper}}, {"low", {t.low.lower, t.low.upper}}}},
      {"class_reference", t.class_reference},
      {"min_support", c.detection.min_support},
      {"subclass_depth", c.detection.depth}};
  std::vector<std::string> modes;
  for (auto m : c.fairness_modes) modes.emplace_back(to_string(m));
  j["fairness_modes"] = modes;
  const auto& sc = c.scorecard;
  j["scorecard"] = {{"columns", sc.columns},
                    {"max_prebins", sc.binning.max_prebins},
                    {"min_bin_fraction", sc.binning.min_bin_fraction},
                    {"smoothing", sc.binning.smoothing},
                    {"learning_rate", sc.learning_rate},
                    {"iterations", sc.iterations},
                    {"tolerance", sc.tolerance},
                    {"pdo", sc.scaling.pdo},
                    {"base_score", sc.scaling.base_score},
                    {"base_odds", sc.scaling.base_odds}};
  j["score_threshold"] = c.score_threshold;
  j["revenue"] = {{"credit_amount_column", c.revenue.credit_amount_column},
                  {"interest_rate", c.revenue.interest_rate},
                  {"interest_rate_column", c.revenue.interest_rate_column
                                               ? nlohmann::ordered_json(*c.revenue.interest_rate_column)
                                               : nlohmann::ordered_json(nullptr)},
                  {"provision_factor", c.revenue.provision_factor}};
  j["sweep"] = {{"from", c.sweep.from}, {"to", c.sweep.to}, {"step", c.sweep.step}};
  j["output_dir"] = c.output_dir.string();
  return j;
}

void validate(const AuditConfig& c) {
  if (c.sensitive_features.empty()) throw ConfigError("at least one sensitive feature is required");
  if (c.fairness_modes.empty()) throw ConfigError("at least one fairness mode is required");

  const auto& t = c.detection.thresholds;
  validate(t);
  if (t.high.lower > t.low.lower || t.high.upper > t.low.upper) {
    throw ConfigError("the high-rigour interval must not exceed the low-rigour one");
  }
  if (c.detection.depth < 1) throw ConfigError("subclass_depth must be at least 1");

  const auto& sc = c.scorecard;
  if (sc.binning.max_prebins < 1) throw ConfigError("max_prebins must be at least 1");
  if (!(sc.binning.min_bin_fraction >= 0.0 && sc.binning.min_bin_fraction <= 0.5)) {
    throw ConfigError("min_bin_fraction must lie in [0, 0.5]");
  }
  if (!(sc.binning.smoothing > 0.0)) throw ConfigError("smoothing must be positive");
  if (!(sc.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (sc.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (!(sc.scaling.pdo > 0.0)) throw ConfigError("pdo must be positive");
  if (!(sc.scaling.base_odds > 0.0)) throw ConfigError("base_odds must be positive");

  validate(c.revenue);
  if (c.sweep.step <= 0) throw ConfigError("sweep step must be positive");
  if (c.sweep.to < c.sweep.from) throw ConfigError("sweep range is empty");
}

Dataset load_dataset(const AuditConfig& config) {
  if (!std::filesystem::exists(config.dataset.path)) {
    throw IoError("dataset file '" + config.dataset.path.string() + "' does not exist");
  }
  if (config.dataset.format == DatasetFormat::GermanCredit) {
    return derive_sensitive_features(load_german_credit(config.dataset.path));
  }
  if (config.dataset.csv.outcome_column.empty()) {
    throw ConfigError("csv datasets need dataset.outcome_column");
  }
  return load_csv(config.dataset.path, config.dataset.csv);
}

std::vector<SensitiveSpec> resolve_features(const AuditConfig& config, const Dataset& d) {
  std::vector<SensitiveSpec> specs;
  for (const auto& name : config.sensitive_features) specs.push_back(resolve_sensitive(d, name));
  return specs;
}

void check_columns(const AuditConfig& config, const Dataset& d, bool revenue) {
  for (const auto& col : config.conditioning_columns) {
    if (!d.has_column(col)) throw ConfigError("conditioning column '" + col + "' not in dataset");
  }
  for (const auto& col : config.scorecard.columns) {
    if (!d.has_column(col)) throw ConfigError("scorecard column '" + col + "' not in dataset");
  }
  if (revenue && !d.has_column(config.revenue.credit_amount_column)) {
    throw ConfigError("credit amount column '" + config.revenue.credit_amount_column + "' not in dataset");
  }
  if (revenue && config.revenue.interest_rate_column && !d.has_column(*config.revenue.interest_rate_column)) {
    throw ConfigError("interest rate column '" + *config.revenue.interest_rate_column + "' not in dataset");
  }
  resolve_features(config, d);
}

}  // namespace fairaudit
