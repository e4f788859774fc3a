#include "fairaudit/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fairaudit/error.hpp"

namespace fairaudit {

namespace {

void check_support(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  if (p.support() != q.support()) throw AnalysisError("distributions have different supports");
}

double kl_bits(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(sum, 0.0);
}

}  // namespace

DivergenceValue kl(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  check_support(p, q);
  return {DivergenceKind::KL, kl_bits(p.mass(), q.mass())};
}

DivergenceValue kl_normalized(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  const double d = kl(p, q).value;
  const double v = std::isinf(d) ? 1.0 : -std::expm1(-d);
  return {DivergenceKind::KLNormalized, v};
}

DivergenceValue js(const ProbabilityDistribution& p, const ProbabilityDistribution& q) {
  check_support(p, q);
  if (p.mass() == q.mass()) return {DivergenceKind::JS, 0.0};
  // 1 + 1/2 sum [p log2(p/(p+q)) + q log2(q/(p+q))]
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double s = p[i] + q[i];
    if (p[i] > 0.0) sum += p[i] * std::log2(p[i] / s);
    if (q[i] > 0.0) sum += q[i] * std::log2(q[i] / s);
  }
  return {DivergenceKind::JS, std::clamp(1.0 + sum / 2.0, 0.0, 1.0)};
}

DivergenceValue aggregate(std::span<const DivergenceValue> values, Aggregation mode) {
  if (values.empty()) throw AnalysisError("cannot aggregate an empty list of divergences");
  const auto kind = values.front().kind;
  double acc = values.front().value;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v.kind != kind) throw AnalysisError("cannot aggregate divergences of different kinds");
    switch (mode) {
      case Aggregation::Max: acc = std::max(acc, v.value); break;
      case Aggregation::Min: acc = std::min(acc, v.value); break;
      case Aggregation::Mean: sum += v.value; break;
    }
  }
  if (mode == Aggregation::Mean) acc = sum / static_cast<double>(values.size());
  return {kind, acc};
}

// ---------------------------------------------------------------------------

void validate(const ThresholdInterval& interval) {
  if (!(interval.lower >= 0.0 && interval.lower < interval.upper && interval.upper <= 1.0)) {
    throw ConfigError("threshold interval must satisfy 0 <= lower < upper <= 1");
  }
}

void validate(const ThresholdConfig& config) {
  validate(config.high);
  validate(config.low);
  if (!(config.class_reference > 0.0)) throw ConfigError("class reference C_ref must be positive");
}

double interpolate_threshold(double lambda, const ThresholdInterval& interval) {
  if (lambda >= 1.0) return interval.lower;
  if (lambda <= 0.0) return interval.upper;
  return interval.upper - lambda * (interval.upper - interval.lower);
}

ThresholdParams auto_threshold(Rigour r, std::size_t class_count, std::size_t element_count,
                               std::size_t dataset_size, const ThresholdConfig& config) {
  if (class_count < 2) throw AnalysisError("automatic threshold needs at least two classes");
  if (element_count < 1 || element_count > dataset_size) {
    throw AnalysisError("element count must lie in [1, dataset size]");
  }
  validate(config);

  ThresholdParams params;
  params.rigour = r;
  params.class_count = class_count;
  params.element_count = element_count;
  params.dataset_size = dataset_size;
  params.interval = config.interval(r);
  const double classes = static_cast<double>(class_count) / config.class_reference;
  const double share = static_cast<double>(element_count) / static_cast<double>(dataset_size);
  params.lambda = std::min(1.0, classes * share);
  params.epsilon = interpolate_threshold(params.lambda, params.interval);
  return params;
}

std::string_view to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::KL: return "KL";
    case DivergenceKind::KLNormalized: return "KL_normalized";
    case DivergenceKind::JS: return "JS";
  }
  return "JS";
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Max: return "max";
    case Aggregation::Min: return "min";
    case Aggregation::Mean: return "mean";
  }
  return "max";
}

std::string_view to_string(Rigour r) { return r == Rigour::High ? "high" : "low"; }

}  // namespace fairaudit
