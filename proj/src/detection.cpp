#include "fairaudit/detection.hpp"

#include <algorithm>
#include <set>

#include "fairaudit/error.hpp"

namespace fairaudit {

namespace {

std::vector<std::string> empty_class_warnings(const FeaturePartition& fp) {
  std::vector<std::string> out;
  for (const auto& cell : fp.cells) {
    if (cell.rows.empty()) out.push_back("class '" + cell.label + "' is empty");
  }
  return out;
}

// Visits every k-subset of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k == 0 || k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<TestLine> compare_partition(const FeaturePartition& fp, std::span<const Outcome> outcome,
                                        std::size_t dataset_size, const DetectionConfig& config) {
  if (config.mode == AnalysisMode::VsIdeal) {
    return compare_to_ideal(fp, outcome, dataset_size, config.rigour, config.thresholds);
  }
  return {compare_classes(fp, outcome, dataset_size, config.rigour, config.aggregation, config.thresholds)};
}

}  // namespace

std::string_view to_string(AnalysisMode m) {
  return m == AnalysisMode::VsIdeal ? "vs_ideal" : "class_vs_class";
}

std::vector<TestLine> compare_to_ideal(const FeaturePartition& fp, std::span<const Outcome> outcome,
                                       std::size_t dataset_size, Rigour rigour,
                                       const ThresholdConfig& thresholds,
                                       const std::optional<ProbabilityDistribution>& ideal) {
  RowSet pooled;
  for (const auto& cell : fp.cells) pooled.insert(pooled.end(), cell.rows.begin(), cell.rows.end());
  if (pooled.empty()) throw AnalysisError("partition of '" + fp.feature.name + "' has no rows");
  std::sort(pooled.begin(), pooled.end());
  const ProbabilityDistribution reference = ideal ? *ideal : *label_distribution(outcome, pooled);

  std::vector<TestLine> lines;
  for (const auto& cell : fp.cells) {
    TestLine line;
    line.conditions = fp.conditions;
    line.classes = {cell.label};
    line.class_sizes = {cell.rows.size()};
    line.union_count = cell.rows.size();
    if (cell.rows.empty()) {
      line.warnings.push_back("class '" + cell.label + "' is empty");
      lines.push_back(std::move(line));
      continue;
    }
    const auto observed = label_distribution(outcome, cell.rows);
    line.divergence = kl_normalized(reference, *observed);
    line.epsilon = auto_threshold(rigour, fp.feature.classes.size(), cell.rows.size(), dataset_size,
                                  thresholds).epsilon;
    line.violated = line.divergence->value > line.epsilon;
    lines.push_back(std::move(line));
  }
  return lines;
}

TestLine compare_classes(const FeaturePartition& fp, std::span<const Outcome> outcome,
                         std::size_t dataset_size, Rigour rigour, Aggregation aggregation,
                         const ThresholdConfig& thresholds) {
  TestLine line;
  line.conditions = fp.conditions;
  line.warnings = empty_class_warnings(fp);

  std::vector<ProbabilityDistribution> dists;
  for (const auto& cell : fp.cells) {
    if (cell.rows.empty()) continue;
    line.classes.push_back(cell.label);
    line.class_sizes.push_back(cell.rows.size());
    line.union_count += cell.rows.size();
    dists.push_back(*label_distribution(outcome, cell.rows));
  }
  if (dists.size() < 2) {
    line.warnings.push_back("fewer than two non-empty classes; comparison skipped");
    return line;
  }

  std::vector<DivergenceValue> pairwise;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) pairwise.push_back(js(dists[i], dists[j]));
  }
  line.divergence = aggregate(pairwise, aggregation);
  line.epsilon = auto_threshold(rigour, fp.feature.classes.size(), line.union_count, dataset_size,
                                thresholds).epsilon;
  line.violated = line.divergence->value > line.epsilon;
  return line;
}

std::vector<TestLine> subclass_double_check(const Dataset& d, const SensitiveSpec& sensitive,
                                            const std::vector<std::string>& nonsensitive,
                                            std::span<const Outcome> outcome,
                                            const DetectionConfig& config) {
  if (config.depth < 1) throw ConfigError("subclass depth must be at least 1");
  std::vector<const std::vector<std::string>*> columns;
  for (const auto& name : nonsensitive) columns.push_back(&d.column(name).values);

  std::vector<TestLine> lines;
  const std::size_t max_depth = std::min(config.depth, nonsensitive.size());
  for (std::size_t k = 1; k <= max_depth; ++k) {
    for_each_combination(nonsensitive.size(), k, [&](const std::vector<std::size_t>& combo) {
      std::set<std::vector<std::string>> assignments;
      for (std::size_t r = 0; r < d.size(); ++r) {
        std::vector<std::string> key;
        key.reserve(combo.size());
        for (auto c : combo) key.push_back((*columns[c])[r]);
        assignments.insert(std::move(key));
      }
      for (const auto& values : assignments) {
        std::vector<Condition> conditions;
        for (std::size_t i = 0; i < combo.size(); ++i) {
          conditions.push_back({nonsensitive[combo[i]], values[i]});
        }
        const auto fp = partition(d, sensitive, conditions);
        const auto support = fp.covered();
        if (support < config.min_support) {
          TestLine line;
          line.conditions = conditions;
          line.union_count = support;
          for (const auto& cell : fp.cells) {
            if (cell.rows.empty()) continue;
            line.classes.push_back(cell.label);
            line.class_sizes.push_back(cell.rows.size());
          }
          line.warnings = empty_class_warnings(fp);
          line.warnings.push_back("subclass support " + std::to_string(support) + " below minimum " +
                                  std::to_string(config.min_support) + "; comparison skipped");
          lines.push_back(std::move(line));
          continue;
        }
        auto produced = compare_partition(fp, outcome, d.size(), config);
        lines.insert(lines.end(), std::make_move_iterator(produced.begin()),
                     std::make_move_iterator(produced.end()));
      }
    });
  }
  return lines;
}

TestReport run_test(const Dataset& d, const SensitiveSpec& sensitive, std::span<const Outcome> outcome,
                    const std::vector<std::string>& nonsensitive, const DetectionConfig& config,
                    std::string target) {
  if (outcome.size() != d.size()) throw AnalysisError("outcome length differs from dataset size");
  validate(config.thresholds);

  TestReport report;
  report.sensitive_feature = sensitive.name;
  report.target = std::move(target);
  report.mode = config.mode;
  report.divergence_kind =
      config.mode == AnalysisMode::VsIdeal ? DivergenceKind::KLNormalized : DivergenceKind::JS;
  report.aggregation = config.aggregation;
  report.rigour = config.rigour;
  report.dataset_size = d.size();
  report.conditioning_columns = nonsensitive;

  const auto top = partition(d, sensitive);
  report.lines = compare_partition(top, outcome, d.size(), config);
  for (const auto& w : empty_class_warnings(top)) report.warnings.push_back("top level: " + w);

  auto sub = subclass_double_check(d, sensitive, nonsensitive, outcome, config);
  const auto skipped = static_cast<std::size_t>(
      std::count_if(sub.begin(), sub.end(), [](const TestLine& l) { return l.skipped(); }));
  if (skipped > 0) {
    report.warnings.push_back(std::to_string(skipped) + " of " + std::to_string(sub.size()) +
                              " subclass lines skipped");
  }
  report.lines.insert(report.lines.end(), std::make_move_iterator(sub.begin()),
                      std::make_move_iterator(sub.end()));

  if (std::all_of(report.lines.begin(), report.lines.end(), [](const TestLine& l) { return l.skipped(); })) {
    report.warnings.push_back("every comparison was skipped");
  }
  return report;
}

}  // namespace fairaudit
