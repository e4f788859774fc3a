#include "fairaudit/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fairaudit/error.hpp"

namespace fairaudit {

namespace {

bool parse_integer(std::string_view text, double& out) {
  long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) return false;
  out = static_cast<double>(v);
  return true;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

// Categorical code domains of the Statlog German Credit attributes; an empty
// entry marks an integer attribute.
struct AttributeDomain {
  int first;
  int last;
};

const std::vector<std::optional<AttributeDomain>>& german_domains() {
  static const std::vector<std::optional<AttributeDomain>> domains = {
      AttributeDomain{11, 14},    std::nullopt, AttributeDomain{30, 34},
      AttributeDomain{40, 410},   std::nullopt, AttributeDomain{61, 65},
      AttributeDomain{71, 75},    std::nullopt, AttributeDomain{91, 95},
      AttributeDomain{101, 103},  std::nullopt, AttributeDomain{121, 124},
      std::nullopt,               AttributeDomain{141, 143}, AttributeDomain{151, 153},
      std::nullopt,               AttributeDomain{171, 174}, std::nullopt,
      AttributeDomain{191, 192},  AttributeDomain{201, 202},
  };
  return domains;
}

bool valid_code(std::string_view code, const AttributeDomain& dom) {
  if (code.size() < 3 || code[0] != 'A') return false;
  double n = 0;
  if (!parse_integer(code.substr(1), n)) return false;
  const int v = static_cast<int>(n);
  if (dom.first == 40) {  // purpose: A40..A49 plus A410
    return (v >= 40 && v <= 49) || v == 410;
  }
  return v >= dom.first && v <= dom.last;
}

std::vector<std::string> split_csv_line(const std::string& line, const std::string& source,
                                        std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError(source, lineno, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string_view to_string(Outcome o) { return o == Outcome::Good ? "good" : "bad"; }

std::string_view to_string(ColumnKind k) {
  switch (k) {
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Integer: return "integer";
    case ColumnKind::Derived: return "derived";
  }
  return "categorical";
}

// ---------------------------------------------------------------------------

Dataset::Dataset(std::vector<Column> columns, std::vector<Outcome> outcome)
    : columns_(std::move(columns)), outcome_(std::move(outcome)) {
  if (outcome_.empty()) throw AnalysisError("dataset has no rows");
  std::set<std::string_view> names;
  numeric_.resize(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = columns_[c];
    if (!names.insert(col.name).second) throw ConfigError("duplicate column '" + col.name + "'");
    if (col.values.size() != outcome_.size()) {
      throw AnalysisError("column '" + col.name + "' has " + std::to_string(col.values.size()) +
                          " values, expected " + std::to_string(outcome_.size()));
    }
    if (col.kind == ColumnKind::Integer) {
      auto& nums = numeric_[c];
      nums.resize(col.values.size());
      for (std::size_t r = 0; r < col.values.size(); ++r) {
        if (!parse_integer(col.values[r], nums[r])) {
          throw ParseError("column '" + col.name + "' row " + std::to_string(r + 1) +
                           ": not an integer: '" + col.values[r] + "'");
        }
      }
    }
  }
}

bool Dataset::has_column(std::string_view name) const {
  return std::any_of(columns_.begin(), columns_.end(),
                     [&](const Column& c) { return c.name == name; });
}

std::size_t Dataset::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw ConfigError("unknown column '" + std::string(name) + "'");
}

const Column& Dataset::column(std::string_view name) const { return columns_[column_index(name)]; }

std::span<const double> Dataset::numeric(std::string_view name) const {
  const auto i = column_index(name);
  if (columns_[i].kind != ColumnKind::Integer) {
    throw ConfigError("column '" + std::string(name) + "' is not numeric");
  }
  return numeric_[i];
}

Dataset Dataset::with_column(Column c) const {
  auto cols = columns_;
  auto it = std::find_if(cols.begin(), cols.end(),
                         [&](const Column& x) { return x.name == c.name; });
  if (it != cols.end()) {
    *it = std::move(c);
  } else {
    cols.push_back(std::move(c));
  }
  return Dataset(std::move(cols), outcome_);
}

// ---------------------------------------------------------------------------

Dataset load_german_credit(const std::filesystem::path& path) {
  auto in = open_input(path);
  const auto& domains = german_domains();
  const std::string source = path.string();

  std::vector<Column> cols(20);
  for (std::size_t i = 0; i < 20; ++i) {
    cols[i].name = "Attribute" + std::to_string(i + 1);
    cols[i].kind = domains[i] ? ColumnKind::Categorical : ColumnKind::Integer;
  }
  std::vector<Outcome> outcome;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string f; fields >> f;) tok.push_back(std::move(f));
    if (tok.size() != 21) {
      throw ParseError(source, lineno, "expected 21 fields, found " + std::to_string(tok.size()));
    }
    for (std::size_t i = 0; i < 20; ++i) {
      if (domains[i]) {
        if (!valid_code(tok[i], *domains[i])) {
          throw ParseError(source, lineno,
                           "unknown code '" + tok[i] + "' for Attribute" + std::to_string(i + 1));
        }
      } else {
        double v = 0;
        if (!parse_integer(tok[i], v)) {
          throw ParseError(source, lineno,
                           "Attribute" + std::to_string(i + 1) + " is not an integer: '" + tok[i] + "'");
        }
      }
      cols[i].values.push_back(tok[i]);
    }
    if (tok[20] == "1") {
      outcome.push_back(Outcome::Good);
    } else if (tok[20] == "2") {
      outcome.push_back(Outcome::Bad);
    } else {
      throw ParseError(source, lineno, "label must be 1 or 2, found '" + tok[20] + "'");
    }
  }
  if (outcome.empty()) throw ParseError(source, 0, "empty dataset");
  return Dataset(std::move(cols), std::move(outcome));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  auto in = open_input(path);
  const std::string source = path.string();
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 0, "empty file");
  const auto header = split_csv_line(strip_cr(line), source, 1);

  std::size_t outcome_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == options.outcome_column) outcome_idx = i;
  }
  if (outcome_idx == header.size()) {
    throw ConfigError("outcome column '" + options.outcome_column + "' not in header of " + source);
  }

  std::vector<Column> cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i != outcome_idx) cols.push_back(Column{header[i], ColumnKind::Categorical, {}});
  }
  std::vector<Outcome> outcome;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    auto fields = split_csv_line(line, source, lineno);
    if (fields.size() != header.size()) {
      throw ParseError(source, lineno, "expected " + std::to_string(header.size()) +
                                           " fields, found " + std::to_string(fields.size()));
    }
    std::size_t c = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == outcome_idx) {
        if (fields[i] == options.good_value) {
          outcome.push_back(Outcome::Good);
        } else if (fields[i] == options.bad_value) {
          outcome.push_back(Outcome::Bad);
        } else {
          throw ParseError(source, lineno, "outcome value '" + fields[i] + "' is neither '" +
                                               options.good_value + "' nor '" + options.bad_value + "'");
        }
      } else {
        cols[c++].values.push_back(std::move(fields[i]));
      }
    }
  }
  if (outcome.empty()) throw ParseError(source, 0, "no data rows");

  for (auto& col : cols) {
    double tmp = 0;
    const bool all_int = std::all_of(col.values.begin(), col.values.end(),
                                     [&](const std::string& v) { return parse_integer(v, tmp); });
    if (all_int) col.kind = ColumnKind::Integer;
  }
  return Dataset(std::move(cols), std::move(outcome));
}

// ---------------------------------------------------------------------------

SensitiveSpec gender_spec() { return {"gender", std::string(kGenderColumn), {"male", "female"}}; }

SensitiveSpec age_group_spec() {
  return {"age", std::string(kAgeGroupColumn), {"[0-27]", "[27-37]", "[37-47]", "[>47]"}};
}

SensitiveSpec nationality_spec() {
  return {"nationality", std::string(kForeignColumn), {"foreign", "domestic"}};
}

std::string age_bracket(double age) {
  if (age < 27) return "[0-27]";
  if (age < 37) return "[27-37]";
  if (age < 47) return "[37-47]";
  return "[>47]";
}

Dataset derive_sensitive_features(const Dataset& d) {
  for (const char* src : {"Attribute9", "Attribute13", "Attribute20"}) {
    if (!d.has_column(src)) throw ConfigError(std::string("missing source column '") + src + "'");
  }
  const auto n = d.size();
  Column gender{std::string(kGenderColumn), ColumnKind::Derived, {}};
  Column age{std::string(kAgeGroupColumn), ColumnKind::Derived, {}};
  Column foreign{std::string(kForeignColumn), ColumnKind::Derived, {}};
  gender.values.reserve(n);
  age.values.reserve(n);
  foreign.values.reserve(n);

  const auto& status = d.column("Attribute9").values;
  for (const auto& code : status) {
    if (code == "A92" || code == "A95") {
      gender.values.emplace_back("female");
    } else if (code == "A91" || code == "A93" || code == "A94") {
      gender.values.emplace_back("male");
    } else {
      throw AnalysisError("Attribute9: cannot map code '" + code + "' to a gender");
    }
  }

  const auto& age_col = d.column("Attribute13");
  for (const auto& text : age_col.values) {
    double years = 0;
    if (!parse_integer(text, years)) throw AnalysisError("Attribute13: not an age: '" + text + "'");
    age.values.push_back(age_bracket(years));
  }

  for (const auto& code : d.column("Attribute20").values) {
    if (code == "A201") {
      foreign.values.emplace_back("foreign");
    } else if (code == "A202") {
      foreign.values.emplace_back("domestic");
    } else {
      throw AnalysisError("Attribute20: cannot map code '" + code + "' to a foreign flag");
    }
  }

  return d.with_column(std::move(gender)).with_column(std::move(age)).with_column(std::move(foreign));
}

SensitiveSpec resolve_sensitive(const Dataset& d, std::string_view name) {
  std::optional<SensitiveSpec> spec;
  if (name == "gender") {
    spec = gender_spec();
  } else if (name == "age" || name == "age_group") {
    spec = age_group_spec();
  } else if (name == "nationality" || name == "foreign") {
    spec = nationality_spec();
  }
  if (spec) {
    if (!d.has_column(spec->column)) {
      throw ConfigError("sensitive feature '" + std::string(name) +
                        "' needs derived column '" + spec->column + "'");
    }
    return *spec;
  }
  if (!d.has_column(name)) throw ConfigError("unknown sensitive feature '" + std::string(name) + "'");
  auto classes = distinct_values(d, name);
  if (classes.size() < 2) {
    throw ConfigError("sensitive feature '" + std::string(name) + "' has fewer than two classes");
  }
  return SensitiveSpec{std::string(name), std::string(name), std::move(classes)};
}

// ---------------------------------------------------------------------------

std::size_t FeaturePartition::covered() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.rows.size();
  return n;
}

std::size_t FeaturePartition::non_empty_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const PartitionCell& c) { return !c.rows.empty(); }));
}

std::vector<std::string> distinct_values(const Dataset& d, std::string_view column) {
  const auto& values = d.column(column).values;
  std::set<std::string> uniq(values.begin(), values.end());
  return {uniq.begin(), uniq.end()};
}

FeaturePartition partition(const Dataset& d, const SensitiveSpec& feature,
                           const std::vector<Condition>& conditions) {
  const auto& labels = d.column(feature.column).values;
  std::vector<const std::vector<std::string>*> cond_values;
  for (const auto& cond : conditions) {
    const auto& vals = d.column(cond.column).values;
    if (std::find(vals.begin(), vals.end(), cond.value) == vals.end()) {
      throw ConfigError("value '" + cond.value + "' never occurs in column '" + cond.column + "'");
    }
    cond_values.push_back(&vals);
  }

  std::map<std::string_view, std::size_t> slot;
  FeaturePartition fp{feature, conditions, {}};
  for (const auto& cls : feature.classes) {
    if (!slot.emplace(cls, fp.cells.size()).second) {
      throw ConfigError("duplicate class '" + cls + "' in feature '" + feature.name + "'");
    }
    fp.cells.push_back(PartitionCell{cls, {}});
  }

  for (std::size_t r = 0; r < d.size(); ++r) {
    bool match = true;
    for (std::size_t c = 0; c < conditions.size() && match; ++c) {
      match = (*cond_values[c])[r] == conditions[c].value;
    }
    if (!match) continue;
    auto it = slot.find(labels[r]);
    if (it == slot.end()) {
      throw ConfigError("row " + std::to_string(r) + " has value '" + labels[r] +
                        "' outside the classes of '" + feature.name + "'");
    }
    fp.cells[it->second].rows.push_back(r);
  }
  return fp;
}

// ---------------------------------------------------------------------------

ProbabilityDistribution::ProbabilityDistribution(std::vector<std::string> support,
                                                 std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.size() != mass_.size() || mass_.empty()) {
    throw AnalysisError("distribution support and mass sizes differ");
  }
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0 && m <= 1.0)) throw AnalysisError("probability mass outside [0,1]");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw AnalysisError("probability masses do not sum to 1");
}

ProbabilityDistribution ProbabilityDistribution::binary(double good_mass) {
  return ProbabilityDistribution({"good", "bad"}, {good_mass, 1.0 - good_mass});
}

std::optional<ProbabilityDistribution> label_distribution(std::span<const Outcome> outcome,
                                                          const RowSet& rows) {
  if (rows.empty()) return std::nullopt;
  std::size_t good = 0;
  for (auto r : rows) {
    if (r >= outcome.size()) throw AnalysisError("row index out of range");
    if (outcome[r] == Outcome::Good) ++good;
  }
  const auto n = static_cast<double>(rows.size());
  const double g = static_cast<double>(good) / n;
  const double b = static_cast<double>(rows.size() - good) / n;
  return ProbabilityDistribution({"good", "bad"}, {g, b});
}

RowSet all_rows(std::size_t n) {
  RowSet rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

}  // namespace fairaudit
