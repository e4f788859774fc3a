#include "fairaudit/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairaudit/error.hpp"

namespace fairaudit {

using nlohmann::json;

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void expect_format(const json& j, const std::string& format) {
  if (!j.is_object() || j.value("format", std::string{}) != format) {
    throw ParseError("expected a '" + format + "' document");
  }
  if (j.value("version", 0) != kReportVersion) {
    throw ParseError("unsupported " + format + " version");
  }
}

ojson header(const char* format) {
  ojson j;
  j["format"] = format;
  j["version"] = kReportVersion;
  return j;
}

}  // namespace

std::string display(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s(buf);
  if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// ---------------------------------------------------------------------------
// Scorecard

ojson to_json(const Scorecard& sc) {
  ojson j = header("fairaudit.scorecard");
  j["scaling"] = {{"pdo", sc.scaling.pdo},
                  {"base_score", sc.scaling.base_score},
                  {"base_odds", sc.scaling.base_odds}};
  j["intercept"] = sc.intercept;
  j["training"] = {{"iterations", sc.training.iterations},
                   {"final_loss", sc.training.final_loss},
                   {"gradient_norm", sc.training.gradient_norm},
                   {"converged", sc.training.converged}};
  ojson cols = ojson::array();
  for (std::size_t c = 0; c < sc.binnings.size(); ++c) {
    const auto& spec = sc.binnings[c];
    ojson col;
    col["column"] = spec.column;
    col["kind"] = spec.kind == BinKind::Numeric ? "numeric" : "categorical";
    col["coefficient"] = sc.coefficients[c];
    col["iv"] = spec.iv;
    ojson bins = ojson::array();
    for (std::size_t b = 0; b < spec.bins.size(); ++b) {
      const auto& bin = spec.bins[b];
      ojson bj;
      if (spec.kind == BinKind::Numeric) {
        bj["lower"] = bin.lower;
        bj["upper"] = bin.upper;
      } else {
        bj["codes"] = bin.codes;
        bj["rest"] = bin.rest;
      }
      bj["good"] = bin.good;
      bj["bad"] = bin.bad;
      bj["woe"] = bin.woe;
      bj["points"] = sc.bin_points(c, b);
      bins.push_back(std::move(bj));
    }
    col["bins"] = std::move(bins);
    cols.push_back(std::move(col));
  }
  j["columns"] = std::move(cols);
  return j;
}

Scorecard scorecard_from_json(const json& j) {
  expect_format(j, "fairaudit.scorecard");
  try {
    Scorecard sc;
    const auto& s = j.at("scaling");
    sc.scaling = {s.at("pdo").get<double>(), s.at("base_score").get<double>(), s.at("base_odds").get<double>()};
    sc.intercept = j.at("intercept").get<double>();
    const auto& t = j.at("training");
    sc.training = {t.at("iterations").get<std::size_t>(), t.at("final_loss").get<double>(),
                   t.at("gradient_norm").get<double>(), t.at("converged").get<bool>()};
    for (const auto& col : j.at("columns")) {
      BinningSpec spec;
      spec.column = col.at("column").get<std::string>();
      const auto kind = col.at("kind").get<std::string>();
      if (kind != "numeric" && kind != "categorical") throw ParseError("unknown bin kind '" + kind + "'");
      spec.kind = kind == "numeric" ? BinKind::Numeric : BinKind::Categorical;
      spec.iv = col.at("iv").get<double>();
      for (const auto& bj : col.at("bins")) {
        Bin bin;
        if (spec.kind == BinKind::Numeric) {
          bin.lower = bj.at("lower").get<double>();
          bin.upper = bj.at("upper").get<double>();
        } else {
          bin.codes = bj.at("codes").get<std::vector<std::string>>();
          bin.rest = bj.at("rest").get<bool>();
        }
        bin.good = bj.at("good").get<std::size_t>();
        bin.bad = bj.at("bad").get<std::size_t>();
        bin.woe = bj.at("woe").get<double>();
        spec.bins.push_back(std::move(bin));
      }
      if (spec.bins.empty()) throw ParseError("column '" + spec.column + "' has no bins");
      sc.binnings.push_back(std::move(spec));
      sc.coefficients.push_back(col.at("coefficient").get<double>());
    }
    if (!(sc.scaling.pdo > 0.0)) throw ParseError("scorecard pdo must be positive");
    return sc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scorecard: ") + e.what());
  }
}

ojson to_json(const ScoreMetrics& m) {
  ojson j = header("fairaudit.metrics");
  j["auc"] = m.auc;
  j["auc_display"] = display(m.auc);
  j["gini"] = m.gini;
  j["gini_display"] = display(m.gini);
  j["threshold"] = m.threshold;
  j["accuracy"] = m.accuracy;
  j["confusion"] = {{"good_accepted", m.confusion.good_accepted},
                    {"bad_accepted", m.confusion.bad_accepted},
                    {"good_rejected", m.confusion.good_rejected},
                    {"bad_rejected", m.confusion.bad_rejected}};
  ojson roc = ojson::array();
  for (const auto& p : m.roc) roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}, {"cutoff", p.cutoff}});
  j["roc"] = std::move(roc);
  return j;
}

// ---------------------------------------------------------------------------
// Detection and risk

ojson to_json(const TestLine& line) {
  ojson j;
  ojson conds = ojson::array();
  for (const auto& c : line.conditions) conds.push_back({{"column", c.column}, {"value", c.value}});
  j["conditions"] = std::move(conds);
  j["classes"] = line.classes;
  j["class_sizes"] = line.class_sizes;
  j["union_count"] = line.union_count;
  if (line.divergence) {
    j["divergence"] = line.divergence->value;
    j["divergence_display"] = display(line.divergence->value);
    j["epsilon"] = line.epsilon;
    j["epsilon_display"] = display(line.epsilon);
  } else {
    j["divergence"] = nullptr;
    j["divergence_display"] = nullptr;
    j["epsilon"] = nullptr;
    j["epsilon_display"] = nullptr;
  }
  j["violated"] = line.violated;
  j["skipped"] = line.skipped();
  j["warnings"] = line.warnings;
  return j;
}

ojson to_json(const TestReport& r) {
  ojson j = header("fairaudit.test_report");
  j["sensitive_feature"] = r.sensitive_feature;
  j["target"] = r.target;
  j["mode"] = to_string(r.mode);
  j["divergence_kind"] = to_string(r.divergence_kind);
  j["aggregation"] = to_string(r.aggregation);
  j["rigour"] = to_string(r.rigour);
  j["dataset_size"] = r.dataset_size;
  j["conditioning_columns"] = r.conditioning_columns;
  j["warnings"] = r.warnings;
  ojson lines = ojson::array();
  for (const auto& l : r.lines) lines.push_back(to_json(l));
  j["lines"] = std::move(lines);
  return j;
}

ojson to_json(const HazardValue& h) {
  ojson j = header("fairaudit.hazard");
  j["test"] = h.test;
  j["target"] = h.target;
  j["mode"] = to_string(h.mode);
  j["value"] = h.value;
  j["value_display"] = display(h.value);
  ojson contribs = ojson::array();
  for (const auto& c : h.contributions) {
    contribs.push_back({{"line", c.line},
                        {"violated", c.violated},
                        {"share", c.share},
                        {"epsilon", c.epsilon},
                        {"distance", c.distance},
                        {"weight", c.weight},
                        {"value", c.value}});
  }
  j["line_contributions"] = std::move(contribs);
  return j;
}

ojson to_json(const RiskReport& r) {
  ojson j = header("fairaudit.risk_report");
  j["overall"] = r.overall;
  j["overall_display"] = display(r.overall);
  j["test_count"] = r.hazards.size();
  ojson hs = ojson::array();
  for (const auto& h : r.hazards) hs.push_back(to_json(h));
  j["hazards"] = std::move(hs);
  return j;
}

RiskReport risk_report_from_json(const json& j) {
  expect_format(j, "fairaudit.risk_report");
  try {
    RiskReport r;
    for (const auto& hj : j.at("hazards")) {
      HazardValue h;
      h.test = hj.at("test").get<std::string>();
      h.target = hj.at("target").get<std::string>();
      const auto mode = hj.at("mode").get<std::string>();
      if (mode != "group" && mode != "individual") throw ParseError("unknown fairness mode '" + mode + "'");
      h.mode = mode == "group" ? FairnessMode::Group : FairnessMode::Individual;
      h.value = hj.at("value").get<double>();
      for (const auto& cj : hj.at("line_contributions")) {
        LineContribution c;
        c.line = cj.at("line").get<std::size_t>();
        c.violated = cj.at("violated").get<bool>();
        c.share = cj.at("share").get<double>();
        c.epsilon = cj.at("epsilon").get<double>();
        c.distance = cj.at("distance").get<double>();
        c.weight = cj.at("weight").get<double>();
        c.value = cj.at("value").get<double>();
        h.contributions.push_back(c);
      }
      r.hazards.push_back(std::move(h));
    }
    r.overall = j.at("overall").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed risk report: ") + e.what());
  }
}

ojson to_json(const HazardComparison& c) {
  ojson j = header("fairaudit.hazard_comparison");
  ojson fs = ojson::array();
  for (const auto& f : c.features) {
    fs.push_back({{"feature", f.feature},
                  {"mode", to_string(f.mode)},
                  {"data_hazard", f.data_hazard},
                  {"model_hazard", f.model_hazard},
                  {"difference", f.difference},
                  {"data_hazard_display", display(f.data_hazard)},
                  {"model_hazard_display", display(f.model_hazard)},
                  {"difference_display", display(f.difference)}});
  }
  j["features"] = std::move(fs);
  j["data_overall"] = c.data_overall;
  j["model_overall"] = c.model_overall;
  j["overall_difference"] = c.overall_difference;
  j["data_overall_display"] = display(c.data_overall);
  j["model_overall_display"] = display(c.model_overall);
  j["overall_difference_display"] = display(c.overall_difference);
  return j;
}

ojson to_json(const SweepRow& row) {
  return {{"threshold", row.threshold},
          {"accepted_count", row.accepted_count},
          {"accepted_credit", row.accepted_credit},
          {"bad_rate", row.bad_rate},
          {"provisions", row.provisions},
          {"profit", row.profit},
          {"model_risk", row.model_risk},
          {"data_risk", row.data_risk},
          {"risk_difference", row.risk_difference},
          {"bad_rate_display", display(row.bad_rate)},
          {"provisions_display", display(row.provisions, 2)},
          {"profit_display", display(row.profit, 2)},
          {"risk_difference_display", display(row.risk_difference)},
          {"warnings", row.warnings}};
}

ojson sweep_to_json(const std::vector<SweepRow>& rows) {
  ojson j = header("fairaudit.sweep");
  ojson rs = ojson::array();
  for (const auto& r : rows) rs.push_back(to_json(r));
  j["rows"] = std::move(rs);
  return j;
}

// ---------------------------------------------------------------------------
// Files

void write_json(const std::filesystem::path& path, const ojson& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_scores_csv(const std::filesystem::path& path, std::span<const int> scores, double threshold) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "row_id,score,decision\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << scores[i] << ',' << (scores[i] >= threshold ? "Good" : "Bad") << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ScoreEntry> read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scores file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("row_id,score", 0) != 0) {
    throw ParseError(path.string(), 1, "expected header 'row_id,score,decision'");
  }
  std::vector<ScoreEntry> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, sc, decision;
    std::getline(ss, id, ',');
    std::getline(ss, sc, ',');
    std::getline(ss, decision, ',');
    ScoreEntry e;
    auto r1 = std::from_chars(id.data(), id.data() + id.size(), e.row_id);
    auto r2 = std::from_chars(sc.data(), sc.data() + sc.size(), e.score);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != id.data() + id.size() ||
        r2.ptr != sc.data() + sc.size()) {
      throw ParseError(path.string(), lineno, "malformed score row");
    }
    if (decision == "Good") {
      e.decision = Outcome::Good;
    } else if (decision == "Bad") {
      e.decision = Outcome::Bad;
    } else {
      throw ParseError(path.string(), lineno, "decision must be Good or Bad");
    }
    if (e.row_id != entries.size()) throw ParseError(path.string(), lineno, "row ids must be 0, 1, 2, ...");
    entries.push_back(e);
  }
  return entries;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "threshold,accepted_count,bad_rate,provisions,profit,model_risk,data_risk,risk_difference\n";
  for (const auto& r : rows) {
    out << r.threshold << ',' << r.accepted_count << ',' << shortest(r.bad_rate) << ','
        << shortest(r.provisions) << ',' << shortest(r.profit) << ',' << shortest(r.model_risk) << ','
        << shortest(r.data_risk) << ',' << shortest(r.risk_difference) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace fairaudit
