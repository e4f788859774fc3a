#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairaudit {

enum class ColumnKind { Categorical, Integer, Derived };

enum class Outcome : std::uint8_t { Good, Bad };

std::string_view to_string(Outcome o);
std::string_view to_string(ColumnKind k);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::Categorical;
  std::vector<std::string> values;
};

using RowSet = std::vector<std::size_t>;

/// Immutable labeled table. Columns are stored column-major as text; integer
/// columns additionally keep a parsed numeric view.
class Dataset {
 public:
  Dataset(std::vector<Column> columns, std::vector<Outcome> outcome);

  std::size_t size() const noexcept { return outcome_.size(); }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::span<const Outcome> outcome() const noexcept { return outcome_; }

  bool has_column(std::string_view name) const;
  const Column& column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;

  /// Numeric view of an Integer column. Throws ConfigError for other kinds.
  std::span<const double> numeric(std::string_view name) const;

  /// Copy of this dataset with `c` appended, or replacing a same-named column.
  Dataset with_column(Column c) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<double>> numeric_;  // parallel to columns_, empty unless Integer
  std::vector<Outcome> outcome_;
};

/// Reads the UCI Statlog german.data layout: 21 whitespace-separated fields,
/// columns Attribute1..Attribute20 and the label in field 21 (1 good, 2 bad).
Dataset load_german_credit(const std::filesystem::path& path);

struct CsvOptions {
  std::string outcome_column;
  std::string good_value = "good";
  std::string bad_value = "bad";
};

/// Comma-separated file with a header row. Columns whose values all parse as
/// integers become Integer columns, everything else Categorical.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

// ---------------------------------------------------------------------------
// Sensitive features

struct SensitiveSpec {
  std::string name;    // test identifier, e.g. "gender"
  std::string column;  // column holding the class label of every row
  std::vector<std::string> classes;
};

inline constexpr std::string_view kGenderColumn = "gender";
inline constexpr std::string_view kAgeGroupColumn = "age_group";
inline constexpr std::string_view kForeignColumn = "foreign";

SensitiveSpec gender_spec();
SensitiveSpec age_group_spec();
SensitiveSpec nationality_spec();

/// Age bracket label for an age in years: [0-27], [27-37], [37-47], [>47],
/// lower edge inclusive.
std::string age_bracket(double age);

/// Adds gender (from Attribute9), age_group (Attribute13) and foreign
/// (Attribute20). Re-running replaces the columns with identical values.
Dataset derive_sensitive_features(const Dataset& d);

/// Built-in names (gender, age/age_group, nationality/foreign) map to the
/// derived columns; any other name must be an existing column whose observed
/// values, sorted, become the classes.
SensitiveSpec resolve_sensitive(const Dataset& d, std::string_view name);

// ---------------------------------------------------------------------------
// Partitions

struct Condition {
  std::string column;
  std::string value;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct PartitionCell {
  std::string label;
  RowSet rows;
};

struct FeaturePartition {
  SensitiveSpec feature;
  std::vector<Condition> conditions;
  std::vector<PartitionCell> cells;  // one per class, in class order; may be empty

  std::size_t covered() const;
  std::size_t non_empty_cells() const;
};

FeaturePartition partition(const Dataset& d, const SensitiveSpec& feature,
                           const std::vector<Condition>& conditions = {});

/// Sorted distinct values of a column.
std::vector<std::string> distinct_values(const Dataset& d, std::string_view column);

// ---------------------------------------------------------------------------
// Distributions

class ProbabilityDistribution {
 public:
  /// Throws AnalysisError unless masses lie in [0,1] and sum to 1 within 1e-9.
  ProbabilityDistribution(std::vector<std::string> support, std::vector<double> mass);

  const std::vector<std::string>& support() const noexcept { return support_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }

  /// Binary outcome distribution over the support {good, bad}.
  static ProbabilityDistribution binary(double good_mass);

 private:
  std::vector<std::string> support_;
  std::vector<double> mass_;
};

/// Empirical good/bad frequencies over `rows`. std::nullopt signals an empty
/// class rather than an error.
std::optional<ProbabilityDistribution> label_distribution(std::span<const Outcome> outcome,
                                                          const RowSet& rows);

RowSet all_rows(std::size_t n);

}  // namespace fairaudit
