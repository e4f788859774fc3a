#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fairaudit/tabular.hpp"

namespace testing {

inline const fairaudit::Dataset& german() {
  static const fairaudit::Dataset d =
      fairaudit::derive_sensitive_features(fairaudit::load_german_credit(FAIRAUDIT_GERMAN_DATA));
  return d;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("fairaudit_" + tag);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

/// Small dataset with one categorical sensitive column.
inline fairaudit::Dataset make_dataset(const std::vector<std::pair<std::string, std::vector<std::string>>>& cols,
                                       const std::vector<fairaudit::Outcome>& outcome) {
  std::vector<fairaudit::Column> columns;
  for (const auto& [name, values] : cols) columns.push_back({name, fairaudit::ColumnKind::Categorical, values});
  return fairaudit::Dataset(std::move(columns), outcome);
}

}  // namespace testing
