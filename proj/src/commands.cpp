#include "fairaudit/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "fairaudit/config.hpp"
#include "fairaudit/error.hpp"
#include "fairaudit/serialize.hpp"

namespace fairaudit {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  std::string dataset;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "JSON config file");
  cmd->add_option("--dataset", flags.dataset, "dataset path (overrides the config)");
  cmd->add_option("--out", flags.out, "output directory (overrides the config)");
}

AuditConfig resolve_config(const CommonFlags& flags) {
  AuditConfig config = flags.config.empty() ? AuditConfig{} : load_config(flags.config);
  if (!flags.dataset.empty()) config.dataset.path = flags.dataset;
  if (!flags.out.empty()) config.output_dir = flags.out;
  validate(config);
  return config;
}

fs::path prepare_output(const AuditConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + config.output_dir.string() + "': " + ec.message());
  return config.output_dir;
}

std::vector<int> load_scores(const fs::path& path, const Dataset& d) {
  const auto entries = read_scores_csv(path);
  if (entries.size() != d.size()) {
    throw ConfigError("scores file '" + path.string() + "' has " + std::to_string(entries.size()) +
                      " rows, dataset has " + std::to_string(d.size()));
  }
  std::vector<int> scores;
  scores.reserve(entries.size());
  for (const auto& e : entries) scores.push_back(e.score);
  return scores;
}

std::vector<FairnessMode> parse_modes(const std::string& mode, const AuditConfig& config) {
  if (mode.empty()) return config.fairness_modes;
  if (mode == "both") return {FairnessMode::Group, FairnessMode::Individual};
  return {parse_fairness_mode(mode)};
}

int cmd_train(const CommonFlags& flags, std::ostream& out) {
  const auto config = resolve_config(flags);
  const auto d = load_dataset(config);
  check_columns(config, d);
  const auto dir = prepare_output(config);

  const auto sc = fit_scorecard(d, config.scorecard);
  const auto scores = score_dataset(sc, d);
  const auto metrics = evaluate(std::span<const int>(scores), d.outcome(), config.score_threshold);

  write_json(dir / "scorecard.json", to_json(sc));
  write_scores_csv(dir / "scores.csv", scores, config.score_threshold);
  write_json(dir / "metrics.json", to_json(metrics));

  out << "trained on " << d.size() << " rows, " << sc.binnings.size() << " columns\n"
      << "auc " << display(metrics.auc) << ", gini " << display(metrics.gini) << "\n"
      << "wrote " << (dir / "scorecard.json").string() << ", scores.csv, metrics.json\n";
  return kExitOk;
}

int cmd_audit(const CommonFlags& flags, const std::string& target, const std::string& scores_path,
              const std::string& mode, std::ostream& out) {
  const auto config = resolve_config(flags);
  const auto modes = parse_modes(mode, config);
  if (target == "model" && scores_path.empty()) throw ConfigError("audit --target model needs --scores");
  const auto d = load_dataset(config);
  check_columns(config, d);
  const auto features = resolve_features(config, d);
  const auto dir = prepare_output(config);

  std::vector<Outcome> outcome;
  if (target == "model") {
    outcome = classify(load_scores(scores_path, d), config.score_threshold);
  } else {
    outcome.assign(d.outcome().begin(), d.outcome().end());
  }

  const auto result =
      run_battery(d, outcome, features, config.conditioning_columns, config.detection, modes, target);

  for (const auto& report : result.reports) {
    write_json(dir / ("test_report_" + target + "_" + report.sensitive_feature + ".json"), to_json(report));
    for (const auto& w : report.warnings) out << report.sensitive_feature << ": warning: " << w << "\n";
  }
  for (const auto& h : result.risk.hazards) {
    write_json(dir / ("hazard_" + target + "_" + h.test + "_" + std::string(to_string(h.mode)) + ".json"),
               to_json(h));
    out << "hazard " << h.test << " " << to_string(h.mode) << " " << display(h.value) << "\n";
  }
  write_json(dir / ("risk_report_" + target + ".json"), to_json(result.risk));
  out << "overall risk " << display(result.risk.overall) << "\n";
  return kExitOk;
}

int cmd_compare(const CommonFlags& flags, const std::string& model_path, const std::string& data_path,
                std::ostream& out) {
  const auto config = resolve_config(flags);
  const auto model = risk_report_from_json(read_json(model_path));
  const auto data = risk_report_from_json(read_json(data_path));
  const auto cmp = compare_hazards(model, data);
  const auto dir = prepare_output(config);
  write_json(dir / "comparison.json", to_json(cmp));
  for (const auto& f : cmp.features) {
    out << f.feature << " " << to_string(f.mode) << " " << display(f.difference) << "\n";
  }
  out << "overall difference " << display(cmp.overall_difference) << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, const std::string& scores_path, std::optional<int> from,
              std::optional<int> to, std::optional<int> step, std::ostream& out) {
  auto config = resolve_config(flags);
  if (from) config.sweep.from = *from;
  if (to) config.sweep.to = *to;
  if (step) config.sweep.step = *step;
  const auto grid = threshold_grid(config.sweep.from, config.sweep.to, config.sweep.step);
  const auto d = load_dataset(config);
  check_columns(config, d, true);
  const auto scores = load_scores(scores_path, d);
  const auto dir = prepare_output(config);

  BatterySettings battery{resolve_features(config, d), config.conditioning_columns, config.detection,
                          config.fairness_modes};
  const auto rows = sweep(d, scores, grid, battery, config.revenue);

  write_sweep_csv(dir / "sweep.csv", rows);
  write_json(dir / "sweep.json", sweep_to_json(rows));
  const auto best = std::max_element(rows.begin(), rows.end(),
                                     [](const SweepRow& a, const SweepRow& b) { return a.profit < b.profit; });
  out << rows.size() << " thresholds; best profit " << display(best->profit, 2) << " at " << best->threshold
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fairness risk audit for credit scoring"};
  app.name("fairaudit");
  app.require_subcommand(1);

  CommonFlags train_flags, audit_flags, compare_flags, sweep_flags;

  auto* train = app.add_subcommand("train", "fit the scorecard and score every row");
  add_common(train, train_flags);

  auto* audit = app.add_subcommand("audit", "run the fairness battery and compute hazards");
  add_common(audit, audit_flags);
  std::string target = "data", audit_scores, mode;
  audit->add_option("--target", target, "model or data")->check(CLI::IsMember({"model", "data"}));
  audit->add_option("--scores", audit_scores, "scores CSV from train (needed for --target model)");
  audit->add_option("--mode", mode, "group, individual or both")
      ->check(CLI::IsMember({"group", "individual", "both"}));

  auto* compare = app.add_subcommand("compare", "compare a model risk report with a data risk report");
  add_common(compare, compare_flags);
  std::string model_report, data_report;
  compare->add_option("--model", model_report, "model risk report")->required();
  compare->add_option("--data", data_report, "data risk report")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "revenue and risk over a grid of score thresholds");
  add_common(sweep_cmd, sweep_flags);
  std::string sweep_scores;
  std::optional<int> from, to, step;
  sweep_cmd->add_option("--scores", sweep_scores, "scores CSV from train")->required();
  sweep_cmd->add_option("--from", from, "first threshold");
  sweep_cmd->add_option("--to", to, "last threshold");
  sweep_cmd->add_option("--step", step, "threshold step");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fairaudit: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (train->parsed()) return cmd_train(train_flags, out);
    if (audit->parsed()) return cmd_audit(audit_flags, target, audit_scores, mode, out);
    if (compare->parsed()) return cmd_compare(compare_flags, model_report, data_report, out);
    return cmd_sweep(sweep_flags, sweep_scores, from, to, step, out);
  } catch (const ConfigError& e) {
    err << "fairaudit: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "fairaudit: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "fairaudit: parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "fairaudit: analysis error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}

}  // namespace fairaudit
