#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "fairaudit/error.hpp"
#include "fairaudit/scorecard.hpp"
#include "fairaudit/serialize.hpp"
#include "support.hpp"

using namespace fairaudit;
using testing::german;

namespace {

const Scorecard& german_scorecard() {
  static const Scorecard sc = fit_scorecard(german(), ScorecardConfig{});
  return sc;
}

const std::vector<int>& german_scores() {
  static const std::vector<int> s = score_dataset(german_scorecard(), german());
  return s;
}

Record record_of(const Dataset& d, std::size_t row) {
  Record r;
  for (const auto& c : d.columns()) r[c.name] = c.values[row];
  return r;
}

// WOE and IV straight from the counts of each bin.
struct Oracle {
  std::vector<double> woe;
  double iv = 0.0;
};

Oracle woe_oracle(const std::vector<std::pair<double, double>>& counts, double s) {
  double G = 0, B = 0;
  for (auto [g, b] : counts) {
    G += g;
    B += b;
  }
  const double k = static_cast<double>(counts.size());
  Oracle o;
  for (auto [g, b] : counts) {
    const double gs = (g + s) / (G + s * k);
    const double bs = (b + s) / (B + s * k);
    o.woe.push_back(std::log(gs / bs));
    o.iv += (gs - bs) * std::log(gs / bs);
  }
  return o;
}

std::vector<Outcome> random_labels(std::mt19937& rng, std::size_t n) {
  std::vector<Outcome> labels(n);
  std::bernoulli_distribution bad(0.35);
  for (auto& l : labels) l = bad(rng) ? Outcome::Bad : Outcome::Good;
  labels[0] = Outcome::Good;
  labels[1] = Outcome::Bad;
  return labels;
}

double pairwise_auc(std::span<const double> scores, std::span<const Outcome> labels) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != Outcome::Good) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != Outcome::Bad) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

}  // namespace

TEST_CASE("uninformative column has zero woe and iv") {
  const std::vector<std::string> values{"a", "a", "a", "a", "b", "b", "c", "c", "c", "c"};
  const std::vector<Outcome> labels{Outcome::Good, Outcome::Good, Outcome::Bad, Outcome::Bad, Outcome::Good,
                                    Outcome::Bad,  Outcome::Good, Outcome::Good, Outcome::Bad, Outcome::Bad};
  const auto spec = fit_categorical_bins("x", values, labels, {20, 0.0, 0.5});
  REQUIRE(spec.bins.size() == 3);
  for (const auto& b : spec.bins) CHECK(b.woe == 0.0);
  CHECK(spec.iv == 0.0);
}

TEST_CASE("two-bin fixture matches hand-computed woe and iv") {
  // bin A: 4 of 5 goods, 1 of 5 bads; smoothed shares 0.75 and 0.25
  const std::vector<std::string> values{"A", "A", "A", "A", "A", "B", "B", "B", "B", "B"};
  const std::vector<Outcome> labels{Outcome::Good, Outcome::Good, Outcome::Good, Outcome::Good, Outcome::Bad,
                                    Outcome::Good, Outcome::Bad,  Outcome::Bad,  Outcome::Bad,  Outcome::Bad};
  const auto spec = fit_categorical_bins("x", values, labels, {20, 0.0, 0.5});
  REQUIRE(spec.bins.size() == 2);
  CHECK(spec.bins[0].woe == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(spec.bins[1].woe == doctest::Approx(-std::log(3.0)).epsilon(1e-14));
  CHECK(spec.iv == doctest::Approx(std::log(3.0)).epsilon(1e-14));
}

TEST_CASE("german Attribute1 information value is pinned") {
  const auto spec = fit_bins(german(), "Attribute1", german().outcome(), BinningConfig{});
  REQUIRE(spec.bins.size() == 4);
  CHECK(spec.iv > 0.0);
  CHECK(std::abs(spec.iv - 0.6590559880148301) < 1e-12);
  CHECK(std::abs(spec.bins[3].woe - 1.1706795309563265) < 1e-12);
}

TEST_CASE("fitted woe and iv agree with the count-table oracle on random fixtures") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 50;
    const auto labels = random_labels(rng, n);
    BinningConfig cfg{std::uniform_int_distribution<std::size_t>(2, 10)(rng), 0.05, 0.5};

    std::vector<double> numeric(n);
    std::uniform_int_distribution<int> val(0, 30);
    for (auto& v : numeric) v = val(rng);
    std::vector<std::string> codes(n);
    std::uniform_int_distribution<int> code(0, 6);
    for (auto& c : codes) c = "c" + std::to_string(code(rng));

    for (const auto& spec : {fit_numeric_bins("n", numeric, labels, cfg),
                             fit_categorical_bins("c", codes, labels, cfg)}) {
      std::vector<std::pair<double, double>> counts(spec.bins.size());
      for (std::size_t r = 0; r < n; ++r) {
        const auto b = spec.kind == BinKind::Numeric ? spec.numeric_bin(numeric[r]) : spec.categorical_bin(codes[r]);
        (labels[r] == Outcome::Good ? counts[b].first : counts[b].second) += 1.0;
      }
      const auto o = woe_oracle(counts, cfg.smoothing);
      for (std::size_t b = 0; b < spec.bins.size(); ++b) {
        CHECK(spec.bins[b].good == static_cast<std::size_t>(counts[b].first));
        CHECK(std::abs(spec.bins[b].woe - o.woe[b]) <= 1e-9);
      }
      CHECK(std::abs(spec.iv - o.iv) <= 1e-9);
    }
  }
}

TEST_CASE("numeric bins are monotone in woe and respect the minimum size") {
  const auto& d = german();
  for (const char* col : {"Attribute2", "Attribute5", "Attribute13"}) {
    const auto spec = fit_bins(d, col, d.outcome(), BinningConfig{});
    REQUIRE_FALSE(spec.bins.empty());
    int dir = 0;
    for (std::size_t i = 0; i + 1 < spec.bins.size(); ++i) {
      const int s = spec.bins[i + 1].woe > spec.bins[i].woe ? 1 : -1;
      if (dir == 0) dir = s;
      CHECK(s == dir);
    }
    if (spec.bins.size() > 1) {
      for (const auto& b : spec.bins) CHECK(b.good + b.bad >= 50);
    }
  }
}

TEST_CASE("swapping the label convention negates every woe") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 80;
    auto labels = random_labels(rng, n);
    std::vector<Outcome> swapped(n);
    std::transform(labels.begin(), labels.end(), swapped.begin(),
                   [](Outcome o) { return o == Outcome::Good ? Outcome::Bad : Outcome::Good; });
    std::vector<std::string> codes(n);
    std::uniform_int_distribution<int> code(0, 5);
    for (auto& c : codes) c = std::string(1, static_cast<char>('a' + code(rng)));

    const auto a = fit_categorical_bins("c", codes, labels, BinningConfig{});
    const auto b = fit_categorical_bins("c", codes, swapped, BinningConfig{});
    REQUIRE(a.bins.size() == b.bins.size());
    for (std::size_t i = 0; i < a.bins.size(); ++i) CHECK(a.bins[i].woe == -b.bins[i].woe);
    CHECK(std::abs(a.iv - b.iv) <= 1e-15);
  }
}

TEST_CASE("binning edge cases") {
  const std::vector<Outcome> one_class{Outcome::Good, Outcome::Good};
  CHECK_THROWS_AS(fit_categorical_bins("x", std::vector<std::string>{"a", "b"}, one_class, {}), AnalysisError);
  const std::vector<Outcome> mixed{Outcome::Good, Outcome::Bad, Outcome::Good};
  const auto constant = fit_numeric_bins("x", std::vector<double>{3, 3, 3}, mixed, {});
  REQUIRE(constant.bins.size() == 1);
  CHECK(constant.bins[0].woe == 0.0);

  const auto spec = fit_categorical_bins("x", std::vector<std::string>{"a", "b", "c"}, mixed, {20, 0.0, 0.5});
  CHECK_THROWS_AS(spec.categorical_bin("zzz"), AnalysisError);
  const auto with_rest = fit_categorical_bins("x", std::vector<std::string>{"a", "a", "a", "a", "b"},
                                              std::vector<Outcome>{Outcome::Good, Outcome::Bad, Outcome::Good,
                                                                   Outcome::Bad, Outcome::Good},
                                              {20, 0.3, 0.5});
  CHECK(with_rest.bins[with_rest.categorical_bin("zzz")].rest);
  CHECK(with_rest.categorical_bin("b") == with_rest.categorical_bin("zzz"));
}

TEST_CASE("a perfect predictor gets the largest coefficient") {
  std::mt19937 rng(5);
  const std::size_t n = 200;
  std::vector<Outcome> labels(n);
  std::vector<std::string> perfect(n), noise1(n), noise2(n);
  std::uniform_int_distribution<int> code(0, 3);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i % 3 == 0 ? Outcome::Bad : Outcome::Good;
    perfect[i] = labels[i] == Outcome::Bad ? "yes" : "no";
    noise1[i] = "n" + std::to_string(code(rng));
    noise2[i] = "m" + std::to_string(code(rng));
  }
  const auto d = testing::make_dataset({{"noise1", noise1}, {"perfect", perfect}, {"noise2", noise2}}, labels);
  const auto sc = fit_scorecard(d, ScorecardConfig{});
  REQUIRE(sc.coefficients.size() == 3);
  CHECK(std::abs(sc.coefficients[1]) > std::abs(sc.coefficients[0]));
  CHECK(std::abs(sc.coefficients[1]) > std::abs(sc.coefficients[2]));
}

TEST_CASE("german scores straddle the 550 threshold with both classes on each side") {
  const auto& scores = german_scores();
  const auto labels = german().outcome();
  std::map<std::pair<bool, Outcome>, int> cells;
  for (std::size_t i = 0; i < scores.size(); ++i) cells[{scores[i] >= 550, labels[i]}]++;
  CHECK(cells[{true, Outcome::Good}] > 0);
  CHECK(cells[{true, Outcome::Bad}] > 0);
  CHECK(cells[{false, Outcome::Good}] > 0);
  CHECK(cells[{false, Outcome::Bad}] > 0);
}

TEST_CASE("training is bit-identical across runs") {
  const auto again = fit_scorecard(german(), ScorecardConfig{});
  const auto& sc = german_scorecard();
  CHECK(again.coefficients == sc.coefficients);
  CHECK(again.intercept == sc.intercept);
  CHECK(to_json(again).dump() == to_json(sc).dump());
}

TEST_CASE("record scoring matches dataset scoring and is repeatable") {
  const auto& d = german();
  const auto& sc = german_scorecard();
  for (std::size_t i = 0; i < d.size(); i += 37) {
    const auto r = record_of(d, i);
    CHECK(score(sc, r) == german_scores()[i]);
    CHECK(score(sc, r) == score(sc, r));
  }
  Record missing = record_of(d, 0);
  missing.erase("Attribute1");
  CHECK_THROWS_AS(score(sc, missing), AnalysisError);
}

TEST_CASE("values below the fitted range clamp to the lowest bin") {
  const auto& d = german();
  const auto& sc = german_scorecard();
  const auto durations = d.numeric("Attribute2");
  const double min_duration = *std::min_element(durations.begin(), durations.end());
  auto low = record_of(d, 3);
  auto at_min = low;
  low["Attribute2"] = "0";
  at_min["Attribute2"] = std::to_string(static_cast<int>(min_duration));
  CHECK(score(sc, low) == score(sc, at_min));
}

TEST_CASE("all-zero woe bins score the base score") {
  Scorecard sc;
  sc.scaling = {50.0, 600.0, 10.0};
  for (const char* name : {"x", "y", "z"}) {
    BinningSpec spec{name, BinKind::Categorical, {}, 0.0};
    Bin b;
    b.codes = {"a"};
    spec.bins.push_back(b);
    sc.binnings.push_back(spec);
    sc.coefficients.push_back(0.8);
  }
  CHECK(score(sc, Record{{"x", "a"}, {"y", "a"}, {"z", "a"}}) == 600);
}

TEST_CASE("scorecard json round-trips") {
  const auto& sc = german_scorecard();
  const auto j = nlohmann::json::parse(to_json(sc).dump());
  const auto back = scorecard_from_json(j);
  CHECK(back.coefficients == sc.coefficients);
  CHECK(back.intercept == sc.intercept);
  CHECK(score_dataset(back, german()) == german_scores());
  CHECK_THROWS_AS(scorecard_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("constant scores give auc one half") {
  const std::vector<double> scores(10, 7.0);
  const std::vector<Outcome> labels{Outcome::Good, Outcome::Bad, Outcome::Good, Outcome::Good, Outcome::Bad,
                                    Outcome::Good, Outcome::Bad, Outcome::Good, Outcome::Good, Outcome::Bad};
  const auto m = evaluate(scores, labels, 5.0);
  CHECK(m.auc == 0.5);
  CHECK(m.gini == 0.0);
}

TEST_CASE("perfect ranking gives auc one") {
  const std::vector<double> scores{1, 2, 3, 4, 5, 6};
  const std::vector<Outcome> labels{Outcome::Bad, Outcome::Bad, Outcome::Bad, Outcome::Good, Outcome::Good,
                                    Outcome::Good};
  const auto m = evaluate(scores, labels, 4.0);
  CHECK(m.auc == 1.0);
  CHECK(m.gini == 1.0);
  CHECK(m.confusion.good_accepted == 3);
  CHECK(m.confusion.bad_rejected == 3);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("german in-sample auc lies in the expected band") {
  const auto m = evaluate(std::span<const int>(german_scores()), german().outcome(), 550.0);
  CHECK(m.auc >= 0.75);
  CHECK(m.auc <= 0.85);
  CHECK(m.gini == 2.0 * m.auc - 1.0);
  CHECK(m.roc.front().fpr == 0.0);
  CHECK(m.roc.back().tpr == 1.0);
}

TEST_CASE("trapezoidal auc equals the pairwise rank statistic, gini identity holds") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 60;
    const auto labels = random_labels(rng, n);
    std::vector<double> scores(n);
    std::uniform_int_distribution<int> s(0, 25);
    for (auto& v : scores) v = s(rng);
    const auto m = evaluate(scores, labels, 10.0);
    CHECK(std::abs(m.auc - pairwise_auc(scores, labels)) <= 1e-12);
    CHECK(m.gini == 2.0 * m.auc - 1.0);
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 70;
    const auto labels = random_labels(rng, n);
    std::vector<double> scores(n);
    std::uniform_real_distribution<double> s(-3.0, 3.0);
    for (auto& v : scores) v = std::round(s(rng) * 4.0) / 4.0;
    const double a = std::uniform_real_distribution<double>(0.1, 5.0)(rng);
    const double b = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    std::vector<double> mapped(n);
    std::transform(scores.begin(), scores.end(), mapped.begin(),
                   [&](double x) { return a * std::exp(x) + b + x * x * x; });
    const auto m1 = evaluate(scores, labels, 0.0);
    const auto m2 = evaluate(mapped, labels, 0.0);
    CHECK(std::abs(m1.auc - m2.auc) <= 1e-12);
  }
}

TEST_CASE("classification is Good at or above the threshold") {
  const std::vector<int> scores{549, 550, 551};
  const auto c = classify(scores, 550.0);
  CHECK(c[0] == Outcome::Bad);
  CHECK(c[1] == Outcome::Good);
  CHECK(c[2] == Outcome::Good);
}
