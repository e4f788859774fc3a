#include <cmath>
#include <numbers>

#include "fairaudit/error.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_loss(const std::vector<double>& z, std::span<const Outcome> labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    // log(1 + exp(z)) - y z, stable for large |z|
    const double softplus = z[i] > 0 ? z[i] + std::log1p(std::exp(-z[i])) : std::log1p(std::exp(z[i]));
    loss += softplus - (labels[i] == Outcome::Bad ? z[i] : 0.0);
  }
  return loss / static_cast<double>(z.size());
}

int round_points(double total) { return static_cast<int>(std::llround(total)); }

}  // namespace

double Scorecard::bin_points(std::size_t column, std::size_t bin) const {
  const double k = static_cast<double>(binnings.size());
  const double factor = scaling.pdo / std::numbers::ln2;
  const double woe = binnings[column].bins[bin].woe;
  return -(coefficients[column] * woe + intercept / k) * factor + scaling.base_score / k;
}

Scorecard fit_scorecard(const Dataset& d, const ScorecardConfig& config) {
  if (!(config.scaling.pdo > 0.0)) throw ConfigError("pdo must be positive");
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");

  std::vector<std::string> columns = config.columns;
  if (columns.empty()) {
    for (const auto& c : d.columns()) {
      if (c.kind != ColumnKind::Derived) columns.push_back(c.name);
    }
  }
  if (columns.empty()) throw AnalysisError("no usable columns for the scorecard");

  const auto labels = d.outcome();
  const std::size_t n = d.size();
  const std::size_t k = columns.size();

  Scorecard sc;
  sc.scaling = config.scaling;
  std::vector<std::vector<double>> x(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    sc.binnings.push_back(fit_bins(d, columns[j], labels, config.binning));
    const auto& spec = sc.binnings.back();
    const auto& col = d.column(columns[j]);
    if (spec.kind == BinKind::Numeric) {
      const auto values = d.numeric(columns[j]);
      for (std::size_t i = 0; i < n; ++i) x[j][i] = spec.bins[spec.numeric_bin(values[i])].woe;
    } else {
      for (std::size_t i = 0; i < n; ++i) x[j][i] = spec.bins[spec.categorical_bin(col.values[i])].woe;
    }
  }

  std::vector<double> beta(k, 0.0);
  double b0 = 0.0;
  std::vector<double> z(n, 0.0);
  std::vector<double> residual(n);
  std::vector<double> grad(k);
  const double inv_n = 1.0 / static_cast<double>(n);

  auto linear = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      double s = b0;
      for (std::size_t j = 0; j < k; ++j) s += beta[j] * x[j][i];
      z[i] = s;
    }
  };

  TrainingSummary summary;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    linear();
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = sigmoid(z[i]) - (labels[i] == Outcome::Bad ? 1.0 : 0.0);
      grad_b += residual[i];
    }
    grad_b *= inv_n;
    double norm2 = grad_b * grad_b;
    for (std::size_t j = 0; j < k; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) g += x[j][i] * residual[i];
      grad[j] = g * inv_n;
      norm2 += grad[j] * grad[j];
    }
    summary.gradient_norm = std::sqrt(norm2);
    if (summary.gradient_norm < config.tolerance) {
      summary.converged = true;
      break;
    }
    b0 -= config.learning_rate * grad_b;
    for (std::size_t j = 0; j < k; ++j) beta[j] -= config.learning_rate * grad[j];
    summary.iterations = it + 1;
  }
  linear();
  summary.final_loss = log_loss(z, labels);

  sc.coefficients = std::move(beta);
  sc.intercept = b0;
  sc.training = summary;
  return sc;
}

int score(const Scorecard& sc, const Record& row) {
  double total = 0.0;
  for (std::size_t j = 0; j < sc.binnings.size(); ++j) {
    const auto& spec = sc.binnings[j];
    auto it = row.find(spec.column);
    if (it == row.end()) throw AnalysisError("row lacks scorecard column '" + spec.column + "'");
    total += sc.bin_points(j, spec.bin_of(it->second));
  }
  return round_points(total);
}

std::vector<int> score_dataset(const Scorecard& sc, const Dataset& d) {
  std::vector<double> totals(d.size(), 0.0);
  for (std::size_t j = 0; j < sc.binnings.size(); ++j) {
    const auto& spec = sc.binnings[j];
    if (!d.has_column(spec.column)) {
      throw AnalysisError("dataset lacks scorecard column '" + spec.column + "'");
    }
    const auto& col = d.column(spec.column);
    const bool numeric = spec.kind == BinKind::Numeric && col.kind == ColumnKind::Integer;
    const auto values = numeric ? d.numeric(spec.column) : std::span<const double>{};
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::size_t bin = numeric ? spec.numeric_bin(values[i]) : spec.bin_of(col.values[i]);
      totals[i] += sc.bin_points(j, bin);
    }
  }
  std::vector<int> out;
  out.reserve(totals.size());
  for (double t : totals) out.push_back(round_points(t));
  return out;
}

}  // namespace fairaudit
