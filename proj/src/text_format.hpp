#ifndef ILOCK_TEXT_FORMAT_HPP_
#define ILOCK_TEXT_FORMAT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ilock {

// Raised by every file reader in the library. Line and column are 1-based;
// a column of 0 means "whole line".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  // The same error with `path` in front of the location.
  ParseError in_file(const std::string& path) const;

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  ParseError(const std::string& message, std::size_t line, std::size_t column,
             const std::string& detail);

  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

// Raised when a well-formed file names something that does not exist or
// violates a structural invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an input file cannot be read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Token {
  std::string text;
  std::size_t column = 0;
};

// One non-blank, non-comment line split on whitespace.
struct Record {
  std::size_t line = 0;
  std::vector<Token> tokens;
};

// Splits `text` into records, dropping `#` comments and blank lines.
std::vector<Record> split_records(std::string_view text);

// Key/value view over tokens[first..] of a record. Every token must have the
// form key=value; keys are unique and must be drawn from `allowed`.
class KeyValues {
 public:
  KeyValues(const Record& record, std::size_t first,
            std::initializer_list<std::string_view> allowed);

  bool has(std::string_view key) const;
  const std::string& require(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  // Comma-separated list; "-" and the empty string both mean empty.
  std::vector<std::string> list(std::string_view key) const;
  std::size_t column_of(std::string_view key) const;

 private:
  const Record* record_;
  std::map<std::string, std::pair<std::string, std::size_t>, std::less<>>
      values_;
};

std::vector<std::string> split_list(std::string_view text);
std::string join(const std::vector<std::string>& items, std::string_view sep);

}  // namespace ilock

#endif  // ILOCK_TEXT_FORMAT_HPP_
