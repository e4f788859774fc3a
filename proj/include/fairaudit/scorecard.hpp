#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairaudit/tabular.hpp"

namespace fairaudit {

// ---------------------------------------------------------------------------
// Binning

enum class BinKind { Numeric, Categorical };

/// One bin of a BinningSpec. Numeric bins cover [lower, upper); the last bin
/// also includes its upper edge. Categorical bins list their codes, and a
/// rest-bin collects rare codes plus any code unseen at fit time.
struct Bin {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> codes;
  bool rest = false;
  std::size_t good = 0;
  std::size_t bad = 0;
  double woe = 0.0;
};

struct BinningSpec {
  std::string column;
  BinKind kind = BinKind::Numeric;
  std::vector<Bin> bins;
  double iv = 0.0;

  /// Bin of a numeric value; values outside the fitted range clamp to the
  /// boundary bins.
  std::size_t numeric_bin(double value) const;
  /// Bin of a categorical code; unseen codes go to the rest-bin or throw.
  std::size_t categorical_bin(std::string_view code) const;
  /// Dispatches on kind, parsing `value` for numeric columns.
  std::size_t bin_of(std::string_view value) const;
};

struct BinningConfig {
  std::size_t max_prebins = 20;
  double min_bin_fraction = 0.05;
  double smoothing = 0.5;
};

/// Smoothed weight of evidence, ln(good share / bad share), with `smoothing`
/// added to each cell count.
double smoothed_woe(std::size_t good, std::size_t bad, std::size_t total_good,
                    std::size_t total_bad, std::size_t bin_count, double smoothing);

/// Recomputes counts-derived fields (woe per bin, iv) from bin counts.
void finalize_woe(BinningSpec& spec, double smoothing);

/// Quantile pre-binning followed by greedy merging until every bin holds at
/// least `min_bin_fraction` of rows and WOE is monotone in bin order.
BinningSpec fit_numeric_bins(std::string column, std::span<const double> values,
                             std::span<const Outcome> labels, const BinningConfig& config);

/// One bin per code; codes below `min_bin_fraction` share a rest-bin.
BinningSpec fit_categorical_bins(std::string column, std::span<const std::string> values,
                                 std::span<const Outcome> labels, const BinningConfig& config);

/// Picks numeric or categorical binning from the column kind.
BinningSpec fit_bins(const Dataset& d, std::string_view column, std::span<const Outcome> labels,
                     const BinningConfig& config);

// ---------------------------------------------------------------------------
// Scorecard

struct ScoreScaling {
  double pdo = 50.0;
  double base_score = 600.0;
  double base_odds = 10.0;
};

struct ScorecardConfig {
  BinningConfig binning;
  double learning_rate = 0.5;
  std::size_t iterations = 5000;
  double tolerance = 1e-7;  // stop once the gradient norm falls below this
  ScoreScaling scaling;
  std::vector<std::string> columns;  // empty: every raw column of the dataset
};

struct TrainingSummary {
  std::size_t iterations = 0;
  double final_loss = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Logistic model on WOE-encoded columns, predicting the log-odds of a bad
/// outcome, with score points per bin.
struct Scorecard {
  std::vector<BinningSpec> binnings;
  std::vector<double> coefficients;  // parallel to binnings
  double intercept = 0.0;
  ScoreScaling scaling;
  TrainingSummary training;

  /// -(coef * woe + intercept / K) * pdo / ln 2 + base_score / K
  double bin_points(std::size_t column, std::size_t bin) const;
};

using Record = std::map<std::string, std::string, std::less<>>;

Scorecard fit_scorecard(const Dataset& d, const ScorecardConfig& config);

/// Sum of bin points rounded to the nearest integer.
int score(const Scorecard& sc, const Record& row);
std::vector<int> score_dataset(const Scorecard& sc, const Dataset& d);

// ---------------------------------------------------------------------------
// Evaluation

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double cutoff = 0.0;
};

struct ConfusionCounts {
  std::size_t good_accepted = 0;  // score >= threshold, label good
  std::size_t bad_accepted = 0;
  std::size_t good_rejected = 0;
  std::size_t bad_rejected = 0;
};

struct ScoreMetrics {
  std::vector<RocPoint> roc;
  double auc = 0.0;
  double gini = 0.0;
  double threshold = 0.0;
  ConfusionCounts confusion;
  double accuracy = 0.0;
};

/// ROC with Good as the positive class (a higher score predicts Good),
/// sweeping every distinct score as cutoff; AUC by the trapezoidal rule.
ScoreMetrics evaluate(std::span<const double> scores, std::span<const Outcome> labels,
                      double threshold);
ScoreMetrics evaluate(std::span<const int> scores, std::span<const Outcome> labels,
                      double threshold);

/// Good iff score >= threshold.
std::vector<Outcome> classify(std::span<const int> scores, double threshold);

}  // namespace fairaudit
