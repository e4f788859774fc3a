#include <algorithm>
#include <numeric>

#include "fairaudit/error.hpp"
#include "fairaudit/scorecard.hpp"

namespace fairaudit {

ScoreMetrics evaluate(std::span<const double> scores, std::span<const Outcome> labels,
                      double threshold) {
  if (scores.size() != labels.size()) throw AnalysisError("scores and labels differ in length");
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Outcome::Good));
  const auto negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw AnalysisError("evaluation needs both good and bad labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  ScoreMetrics m;
  m.threshold = threshold;
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  m.roc.push_back({0.0, 0.0, scores[order.front()] + 1.0});

  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double cutoff = scores[order[i]];
    while (i < order.size() && scores[order[i]] == cutoff) {
      (labels[order[i]] == Outcome::Good ? tp : fp) += 1;
      ++i;
    }
    m.roc.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p, cutoff});
  }

  double auc = 0.0;
  for (std::size_t i = 1; i < m.roc.size(); ++i) {
    const auto& a = m.roc[i - 1];
    const auto& b = m.roc[i];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  m.auc = auc;
  m.gini = 2.0 * m.auc - 1.0;

  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool accepted = scores[i] >= threshold;
    const bool good = labels[i] == Outcome::Good;
    if (accepted) {
      (good ? m.confusion.good_accepted : m.confusion.bad_accepted) += 1;
    } else {
      (good ? m.confusion.good_rejected : m.confusion.bad_rejected) += 1;
    }
  }
  m.accuracy = static_cast<double>(m.confusion.good_accepted + m.confusion.bad_rejected) /
               static_cast<double>(scores.size());
  return m;
}

ScoreMetrics evaluate(std::span<const int> scores, std::span<const Outcome> labels,
                      double threshold) {
  std::vector<double> s(scores.begin(), scores.end());
  return evaluate(std::span<const double>(s), labels, threshold);
}

std::vector<Outcome> classify(std::span<const int> scores, double threshold) {
  std::vector<Outcome> out;
  out.reserve(scores.size());
  for (int s : scores) out.push_back(static_cast<double>(s) >= threshold ? Outcome::Good : Outcome::Bad);
  return out;
}

}  // namespace fairaudit
