#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "fairaudit/error.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

namespace {

void check_labels(std::size_t values, std::span<const Outcome> labels) {
  if (values != labels.size()) throw AnalysisError("values and labels differ in length");
  const bool has_good = std::find(labels.begin(), labels.end(), Outcome::Good) != labels.end();
  const bool has_bad = std::find(labels.begin(), labels.end(), Outcome::Bad) != labels.end();
  if (!has_good || !has_bad) throw AnalysisError("binning needs both good and bad labels");
}

std::pair<std::size_t, std::size_t> totals(const std::vector<Bin>& bins) {
  std::size_t g = 0, b = 0;
  for (const auto& bin : bins) {
    g += bin.good;
    b += bin.bad;
  }
  return {g, b};
}

std::vector<double> woe_of(const std::vector<Bin>& bins, double smoothing) {
  const auto [g, b] = totals(bins);
  std::vector<double> woe;
  woe.reserve(bins.size());
  for (const auto& bin : bins) woe.push_back(smoothed_woe(bin.good, bin.bad, g, b, bins.size(), smoothing));
  return woe;
}

void merge_with_next(std::vector<Bin>& bins, std::size_t i) {
  auto& a = bins[i];
  const auto& b = bins[i + 1];
  a.upper = b.upper;
  a.good += b.good;
  a.bad += b.bad;
  bins.erase(bins.begin() + static_cast<std::ptrdiff_t>(i) + 1);
}

}  // namespace

double smoothed_woe(std::size_t good, std::size_t bad, std::size_t total_good, std::size_t total_bad,
                    std::size_t bin_count, double smoothing) {
  const double k = static_cast<double>(bin_count);
  const double good_share = (static_cast<double>(good) + smoothing) /
                            (static_cast<double>(total_good) + smoothing * k);
  const double bad_share = (static_cast<double>(bad) + smoothing) /
                           (static_cast<double>(total_bad) + smoothing * k);
  return std::log(good_share) - std::log(bad_share);
}

void finalize_woe(BinningSpec& spec, double smoothing) {
  const auto [g, b] = totals(spec.bins);
  const double k = static_cast<double>(spec.bins.size());
  spec.iv = 0.0;
  for (auto& bin : spec.bins) {
    bin.woe = smoothed_woe(bin.good, bin.bad, g, b, spec.bins.size(), smoothing);
    const double gs = (static_cast<double>(bin.good) + smoothing) / (static_cast<double>(g) + smoothing * k);
    const double bs = (static_cast<double>(bin.bad) + smoothing) / (static_cast<double>(b) + smoothing * k);
    spec.iv += (gs - bs) * bin.woe;
  }
}

std::size_t BinningSpec::numeric_bin(double value) const {
  std::size_t idx = 0;
  for (std::size_t i = 1; i < bins.size(); ++i) {
    if (value >= bins[i].lower) idx = i;
  }
  return idx;
}

std::size_t BinningSpec::categorical_bin(std::string_view code) const {
  std::size_t rest = bins.size();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& codes = bins[i].codes;
    if (std::find(codes.begin(), codes.end(), code) != codes.end()) return i;
    if (bins[i].rest) rest = i;
  }
  if (rest == bins.size()) {
    throw AnalysisError("column '" + column + "': unseen code '" + std::string(code) + "' and no rest-bin");
  }
  return rest;
}

std::size_t BinningSpec::bin_of(std::string_view value) const {
  if (kind == BinKind::Categorical) return categorical_bin(value);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw AnalysisError("column '" + column + "': not a number: '" + std::string(value) + "'");
  }
  return numeric_bin(v);
}

BinningSpec fit_numeric_bins(std::string column, std::span<const double> values,
                             std::span<const Outcome> labels, const BinningConfig& config) {
  check_labels(values.size(), labels);
  if (config.max_prebins < 1) throw ConfigError("max_prebins must be >= 1");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const std::size_t n = sorted.size();

  std::vector<double> edges{lo};
  for (std::size_t i = 1; i < config.max_prebins; ++i) {
    const double q = sorted[i * n / config.max_prebins];
    if (q > edges.back()) edges.push_back(q);
  }

  BinningSpec spec{std::move(column), BinKind::Numeric, {}, 0.0};
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Bin bin;
    bin.lower = edges[i];
    bin.upper = i + 1 < edges.size() ? edges[i + 1] : hi;
    spec.bins.push_back(bin);
  }
  for (std::size_t r = 0; r < values.size(); ++r) {
    auto& bin = spec.bins[spec.numeric_bin(values[r])];
    (labels[r] == Outcome::Good ? bin.good : bin.bad) += 1;
  }

  const double min_count = config.min_bin_fraction * static_cast<double>(n);
  auto& bins = spec.bins;
  while (bins.size() > 1) {
    const auto woe = woe_of(bins, config.smoothing);

    std::size_t smallest = bins.size();
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const double count = static_cast<double>(bins[i].good + bins[i].bad);
      if (count < min_count && (smallest == bins.size() ||
                                count < static_cast<double>(bins[smallest].good + bins[smallest].bad))) {
        smallest = i;
      }
    }
    if (smallest != bins.size()) {
      std::size_t left = 0;
      if (smallest == 0) {
        left = 0;
      } else if (smallest == bins.size() - 1) {
        left = smallest - 1;
      } else {
        const double to_prev = std::abs(woe[smallest] - woe[smallest - 1]);
        const double to_next = std::abs(woe[smallest] - woe[smallest + 1]);
        left = to_prev <= to_next ? smallest - 1 : smallest;
      }
      merge_with_next(bins, left);
      continue;
    }

    const double direction = woe.back() >= woe.front() ? 1.0 : -1.0;
    std::size_t worst = bins.size();
    double worst_gap = 0.0;
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
      const double step = woe[i + 1] - woe[i];
      if (step * direction < 0.0 && (worst == bins.size() || std::abs(step) < worst_gap)) {
        worst = i;
        worst_gap = std::abs(step);
      }
    }
    if (worst == bins.size()) break;
    merge_with_next(bins, worst);
  }

  finalize_woe(spec, config.smoothing);
  return spec;
}

BinningSpec fit_categorical_bins(std::string column, std::span<const std::string> values,
                                 std::span<const Outcome> labels, const BinningConfig& config) {
  check_labels(values.size(), labels);
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t r = 0; r < values.size(); ++r) {
    auto& c = counts[values[r]];
    (labels[r] == Outcome::Good ? c.first : c.second) += 1;
  }

  const double min_count = config.min_bin_fraction * static_cast<double>(values.size());
  BinningSpec spec{std::move(column), BinKind::Categorical, {}, 0.0};
  Bin rest;
  rest.rest = true;
  for (const auto& [code, gb] : counts) {
    if (static_cast<double>(gb.first + gb.second) >= min_count) {
      Bin bin;
      bin.codes = {code};
      bin.good = gb.first;
      bin.bad = gb.second;
      spec.bins.push_back(std::move(bin));
    } else {
      rest.codes.push_back(code);
      rest.good += gb.first;
      rest.bad += gb.second;
    }
  }
  if (!rest.codes.empty()) spec.bins.push_back(std::move(rest));

  finalize_woe(spec, config.smoothing);
  return spec;
}

BinningSpec fit_bins(const Dataset& d, std::string_view column, std::span<const Outcome> labels,
                     const BinningConfig& config) {
  const auto& col = d.column(column);
  if (col.kind == ColumnKind::Integer) {
    return fit_numeric_bins(col.name, d.numeric(column), labels, config);
  }
  return fit_categorical_bins(col.name, col.values, labels, config);
}

}  // namespace fairaudit
