#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "fairaudit/tabular.hpp"

namespace fairaudit {

enum class DivergenceKind { KL, KLNormalized, JS };

struct DivergenceValue {
  DivergenceKind kind = DivergenceKind::JS;
  double value = 0.0;  // KL may be +inf; the other kinds lie in [0,1]

  friend bool operator==(const DivergenceValue&, const DivergenceValue&) = default;
};

/// Kullback-Leibler divergence in bits, sum p log2(p/q), with 0 log(0/q) = 0
/// and +inf wherever p > 0 and q = 0.
DivergenceValue kl(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// 1 - exp(-kl(p, q)), mapping [0, +inf] onto [0, 1].
DivergenceValue kl_normalized(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

/// Jensen-Shannon divergence in bits against the midpoint mixture.
DivergenceValue js(const ProbabilityDistribution& p, const ProbabilityDistribution& q);

enum class Aggregation { Max, Min, Mean };

DivergenceValue aggregate(std::span<const DivergenceValue> values, Aggregation mode);

// ---------------------------------------------------------------------------
// Automatic threshold

enum class Rigour { High, Low };

struct ThresholdInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct ThresholdConfig {
  ThresholdInterval high{0.002, 0.01};
  ThresholdInterval low{0.01, 0.05};
  double class_reference = 10.0;  // C_ref

  const ThresholdInterval& interval(Rigour r) const { return r == Rigour::High ? high : low; }
};

struct ThresholdParams {
  Rigour rigour = Rigour::High;
  std::size_t class_count = 0;    // n_C
  std::size_t element_count = 0;  // n_D
  std::size_t dataset_size = 0;
  double lambda = 0.0;
  ThresholdInterval interval;
  double epsilon = 0.0;
};

/// Throws ConfigError unless 0 <= lower < upper <= 1.
void validate(const ThresholdInterval& interval);
void validate(const ThresholdConfig& config);

/// lambda * lower + (1 - lambda) * upper.
double interpolate_threshold(double lambda, const ThresholdInterval& interval);

/// lambda = min(1, (n_C / C_ref) * (n_D / N)); epsilon moves from the upper
/// limit towards the lower one as classes grow more numerous and larger.
ThresholdParams auto_threshold(Rigour r, std::size_t class_count, std::size_t element_count,
                               std::size_t dataset_size, const ThresholdConfig& config);

std::string_view to_string(DivergenceKind k);
std::string_view to_string(Aggregation a);
std::string_view to_string(Rigour r);

}  // namespace fairaudit
