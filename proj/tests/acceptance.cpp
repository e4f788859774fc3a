// End-to-end acceptance run: drives the fairaudit binary on German Credit and
// prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/divergence.hpp"
#include "fairaudit/risk.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fairaudit;

namespace {

const std::string kExe = FAIRAUDIT_EXE;
const std::string kData = FAIRAUDIT_GERMAN_DATA;
const fs::path kWork = FAIRAUDIT_WORKDIR;
const std::string kConfig = FAIRAUDIT_REPO_CONFIG;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kExe + " " + args + " >> " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Pipeline {
  fs::path dir;
  std::map<std::string, int> codes;
  double train_seconds = 0.0;
};

Pipeline run_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  Pipeline p{dir, {}, 0.0};
  const auto log = dir / "log.txt";
  const std::string common = " --config " + kConfig + " --dataset " + kData + " --out " + dir.string();
  const auto t0 = std::chrono::steady_clock::now();
  p.codes["train"] = run("train" + common, log);
  p.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto scores = (dir / "scores.csv").string();
  p.codes["audit data"] = run("audit --target data" + common, log);
  p.codes["audit model"] = run("audit --target model --scores " + scores + common, log);
  p.codes["compare"] = run("compare --model " + (dir / "risk_report_model.json").string() + " --data " +
                               (dir / "risk_report_data.json").string() + common,
                           log);
  p.codes["sweep"] = run("sweep --scores " + scores + common, log);
  return p;
}

// hazard value by (feature, mode)
std::map<std::pair<std::string, std::string>, double> hazards(const json& risk) {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& h : risk["hazards"]) out[{h["test"], h["mode"]}] = h["value"].get<double>();
  return out;
}

bool ordered(const std::map<std::pair<std::string, std::string>, double>& h, const std::vector<std::string>& order,
             std::string& detail) {
  bool ok = true;
  for (const char* mode : {"group", "individual"}) {
    detail += std::string(mode) + ":";
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto it = h.find({order[i], mode});
      if (it == h.end()) return false;
      detail += " " + order[i] + "=" + fmt(it->second);
      if (!(it->second > 0.0)) ok = false;
      if (i > 0 && !(h.at({order[i - 1], mode}) > it->second)) ok = false;
    }
    detail += "; ";
  }
  return ok;
}

// Count-table oracle for criterion 5, in long double natural logs.
long double oracle(const std::vector<long>& a, const std::vector<long>& b, bool js_kind) {
  long double na = 0, nb = 0;
  for (auto x : a) na += x;
  for (auto x : b) nb += x;
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double p = a[i] / na, q = b[i] / nb;
    if (js_kind) {
      const long double m = (p + q) / 2;
      if (p > 0) s += 0.5L * p * std::log(p / m);
      if (q > 0) s += 0.5L * q * std::log(q / m);
    } else if (p > 0) {
      if (q == 0) return std::numeric_limits<long double>::infinity();
      s += p * std::log(p / q);
    }
  }
  return s / std::log(2.0L);
}

ProbabilityDistribution to_dist(const std::vector<long>& c) {
  double n = 0;
  for (auto x : c) n += static_cast<double>(x);
  std::vector<std::string> support;
  std::vector<double> mass;
  for (std::size_t i = 0; i < c.size(); ++i) {
    support.push_back("o" + std::to_string(i));
    mass.push_back(static_cast<double>(c[i]) / n);
  }
  return {support, mass};
}

void criterion5() {
  std::mt19937 rng(5);
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    std::uniform_int_distribution<long> c(trial % 4 == 0 ? 0 : 1, 400);
    std::vector<long> a(k), b(k);
    for (auto& x : a) x = c(rng);
    for (auto& x : b) x = c(rng);
    a[0] += 1;
    b[k - 1] += 1;
    const auto p = to_dist(a), q = to_dist(b);
    const long double want_kl = oracle(a, b, false);
    const double got_kl = kl(p, q).value;
    if (std::isinf(want_kl)) {
      ok = ok && std::isinf(got_kl) && kl_normalized(p, q).value == 1.0;
    } else {
      worst = std::max(worst, std::abs(got_kl - static_cast<double>(want_kl)));
      worst = std::max(worst, std::abs(kl_normalized(p, q).value - static_cast<double>(1.0L - std::exp(-want_kl))));
    }
    worst = std::max(worst, std::abs(js(p, q).value - static_cast<double>(oracle(a, b, true))));
    worst = std::max(worst, std::abs(js(p, q).value - js(q, p).value));
    ok = ok && kl(p, p).value == 0.0;
    std::vector<long> left(k, 0), right(k, 0);
    left[0] = a[0];
    for (std::size_t i = 1; i < k; ++i) right[i] = b[i] + 1;
    ok = ok && js(to_dist(left), to_dist(right)).value == 1.0;
  }
  ok = ok && worst <= 1e-12;
  report(5, "divergence kernel", ok, "max deviation from oracle " + fmt(worst) + " over 1000 pairs (tol 1e-12)");
}

void criterion6() {
  const ThresholdConfig cfg;
  const std::size_t N = 1000;
  bool ok = true;
  int points = 0;
  for (std::size_t c = 2; c < 12; ++c) {
    for (std::size_t n = 100; n <= N; n += 100) {
      ++points;
      const double e = auto_threshold(Rigour::High, c, n, N, cfg).epsilon;
      const double low = auto_threshold(Rigour::Low, c, n, N, cfg).epsilon;
      ok = ok && e <= low;
      if (c > 2) ok = ok && e <= auto_threshold(Rigour::High, c - 1, n, N, cfg).epsilon;
      if (n > 100) ok = ok && e <= auto_threshold(Rigour::High, c, n - 100, N, cfg).epsilon;
      if (c > 2) ok = ok && low <= auto_threshold(Rigour::Low, c - 1, n, N, cfg).epsilon;
      if (n > 100) ok = ok && low <= auto_threshold(Rigour::Low, c, n - 100, N, cfg).epsilon;
    }
  }
  for (auto r : {Rigour::High, Rigour::Low}) {
    ok = ok && interpolate_threshold(0.0, cfg.interval(r)) == cfg.interval(r).upper;
    ok = ok && interpolate_threshold(1.0, cfg.interval(r)) == cfg.interval(r).lower;
  }
  report(6, "threshold policy", ok, std::to_string(points) + " grid points, monotone and endpoints exact");
}

void criterion7() {
  TestReport r;
  r.sensitive_feature = "gender";
  r.dataset_size = 1000;
  TestLine line;
  line.classes = {"male", "female"};
  line.union_count = 500;
  line.divergence = DivergenceValue{DivergenceKind::JS, 0.002};
  line.epsilon = 0.001;
  line.violated = true;
  r.lines = {line};
  const double single = hazard(r, FairnessMode::Group).value;

  auto quiet = r;
  quiet.lines[0].violated = false;
  const double zero = hazard(quiet, FairnessMode::Group).value;

  std::vector<HazardValue> hs;
  double sum = 0.0;
  for (double v : {0.0123, 0.0456, 0.0009, 0.2, 0.031, 0.0}) {
    HazardValue h;
    h.test = "t" + std::to_string(hs.size());
    h.value = v;
    sum += v;
    hs.push_back(h);
  }
  const double mean = overall_risk(hs).overall;
  const bool ok = single == 0.005 && zero == 0.0 && std::abs(mean - sum / 6.0) <= 1e-12;
  report(7, "risk formula", ok, "R_i = " + fmt(single) + " (want 0.005 exactly), no-violation R_i = " + fmt(zero));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const auto a = run_pipeline(kWork / "run1");
  const auto b = run_pipeline(kWork / "run2");

  bool exits_ok = true;
  for (const auto& [cmd, code] : a.codes) {
    if (code != 0) {
      std::cout << "command '" << cmd << "' exited with " << code << " (see " << (a.dir / "log.txt").string()
                << ")" << std::endl;
      exits_ok = false;
    }
  }

  try {
    const auto metrics = load(a.dir / "metrics.json");
    const double auc = metrics["auc"].get<double>();
    const double gini = metrics["gini"].get<double>();
    report(1, "scorecard quality",
           exits_ok && auc >= 0.75 && auc <= 0.85 && gini == 2.0 * auc - 1.0 && a.train_seconds < 30.0,
           "auc " + fmt(auc) + " in [0.75, 0.85], gini " + fmt(gini) + " = 2*auc-1, train " +
               fmt(a.train_seconds) + " s");
  } catch (const std::exception& e) {
    report(1, "scorecard quality", false, e.what());
  }

  json data_risk, model_risk;
  try {
    data_risk = load(a.dir / "risk_report_data.json");
    std::string detail;
    const bool ok = ordered(hazards(data_risk), {"nationality", "age", "gender"}, detail);
    report(2, "data-hazard ordering", ok, detail + "want nationality > age > gender > 0");
  } catch (const std::exception& e) {
    report(2, "data-hazard ordering", false, e.what());
  }

  try {
    model_risk = load(a.dir / "risk_report_model.json");
    std::string detail;
    const bool ok = ordered(hazards(model_risk), {"age", "nationality", "gender"}, detail);
    report(3, "model-hazard ordering", ok, detail + "want age > nationality > gender");
  } catch (const std::exception& e) {
    report(3, "model-hazard ordering", false, e.what());
  }

  try {
    const auto cmp = load(a.dir / "comparison.json");
    bool ok = true;
    std::string detail;
    for (const auto& f : cmp["features"]) {
      const std::string feature = f["feature"];
      const double diff = f["difference"].get<double>();
      if (feature == "nationality") {
        ok = ok && diff < 0.0;
        detail += "nationality/" + f["mode"].get<std::string>() + " " + fmt(diff) + "; ";
      }
      if (feature == "age") {
        ok = ok && diff > 0.0;
        detail += "age/" + f["mode"].get<std::string>() + " " + fmt(diff) + "; ";
      }
    }
    const double overall = cmp["overall_difference"].get<double>();
    const double data = cmp["data_overall"].get<double>();
    ok = ok && std::abs(overall) < 0.5 * data;
    report(4, "bias-correction sign", ok,
           detail + "|overall diff| " + fmt(std::abs(overall)) + " < 0.5 * data risk " + fmt(data));
  } catch (const std::exception& e) {
    report(4, "bias-correction sign", false, e.what());
  }

  criterion5();
  criterion6();
  criterion7();

  try {
    bool ok = a.codes.at("audit data") == 0 && a.codes.at("audit model") == 0;
    std::size_t skipped = 0;
    for (const char* target : {"data", "model"}) {
      const auto rep = load(a.dir / (std::string("test_report_") + target + "_nationality.json"));
      for (const auto& l : rep["lines"]) {
        if (l["skipped"].get<bool>() && !l["warnings"].empty()) ++skipped;
      }
    }
    ok = ok && skipped >= 2;
    report(8, "empty-class handling", ok,
           std::to_string(skipped) + " skipped nationality lines with warnings across data and model audits");
  } catch (const std::exception& e) {
    report(8, "empty-class handling", false, e.what());
  }

  try {
    const auto sweep = load(a.dir / "sweep.json");
    const auto& rows = sweep["rows"];
    int min_score = std::numeric_limits<int>::max();
    {
      std::ifstream in(a.dir / "scores.csv");
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        min_score = std::min(min_score, std::stoi(line.substr(c1 + 1, line.find(',', c1 + 1) - c1 - 1)));
      }
    }
    bool identity = true, base_rate = false, interior = false, near_620 = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const double tca = r["accepted_credit"].get<double>();
      const double br = r["bad_rate"].get<double>();
      identity = identity && r["provisions"].get<double>() == tca * br * 0.2;
      const int t = r["threshold"].get<int>();
      if (t <= min_score) base_rate = r["accepted_count"].get<int>() == 1000 && br == 0.3;
      if (i > 0 && i + 1 < rows.size()) {
        const double p = r["profit"].get<double>();
        if (p > rows[i - 1]["profit"].get<double>() && p > rows[i + 1]["profit"].get<double>()) interior = true;
      }
      if (t >= 610 && t <= 630) near_620 = true;
    }
    report(9, "revenue", identity && base_rate && interior && near_620 && rows.size() == 51,
           std::to_string(rows.size()) + " rows; provisions identity " + (identity ? "exact" : "broken") +
               "; BR below all scores " + (base_rate ? "0.3" : "wrong") + "; interior profit maximum " +
               (interior ? "present" : "absent") + "; rows around 620 " + (near_620 ? "present" : "absent"));
  } catch (const std::exception& e) {
    report(9, "revenue", false, e.what());
  }

  {
    std::size_t compared = 0, differing = 0;
    for (const auto& entry : fs::directory_iterator(a.dir)) {
      if (entry.path().filename() == "log.txt") continue;
      ++compared;
      const auto other = b.dir / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        ++differing;
        std::cout << "  differs: " << entry.path().filename().string() << std::endl;
      }
    }
    report(10, "determinism", compared >= 20 && differing == 0 && a.codes == b.codes,
           std::to_string(compared) + " output files compared byte for byte, " + std::to_string(differing) +
               " differ");
  }

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "acceptance run took " << fmt(total) << " s; " << failures << " criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
