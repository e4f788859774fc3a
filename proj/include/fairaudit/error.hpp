#pragma once

#include <stdexcept>
#include <string>

namespace fairaudit {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (dataset, scores, scorecard or report).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Missing file, unwritable output directory and similar.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or reference to a column that does not exist.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Precondition violated by an analysis operation (single-class labels,
/// mismatched supports, empty inputs).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairaudit
