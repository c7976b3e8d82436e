#include "text_format.hpp"

#include <algorithm>
#include <sstream>

namespace ilock {

namespace {

std::string format_location(std::size_t line, std::size_t column,
                            const std::string& what) {
  std::ostringstream out;
  out << "line " << line;
  if (column > 0) out << ", column " << column;
  out << ": " << what;
  return out.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& what)
    : std::runtime_error(format_location(line, column, what)),
      line_(line),
      column_(column),
      detail_(what) {}

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column, const std::string& detail)
    : std::runtime_error(message),
      line_(line),
      column_(column),
      detail_(detail) {}

ParseError ParseError::in_file(const std::string& path) const {
  return ParseError(path + ": " + what(), line_, column_, detail_);
}

std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    Record record;
    record.line = line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() &&
             (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
        ++i;
      }
      if (i >= line.size()) break;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
             line[i] != '\r') {
        ++i;
      }
      record.tokens.push_back(
          Token{std::string(line.substr(start, i - start)), start + 1});
    }
    if (!record.tokens.empty()) records.push_back(std::move(record));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return records;
}

KeyValues::KeyValues(const Record& record, std::size_t first,
                     std::initializer_list<std::string_view> allowed)
    : record_(&record) {
  for (std::size_t i = first; i < record.tokens.size(); ++i) {
    const Token& token = record.tokens[i];
    auto eq = token.text.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(record.line, token.column,
                       "expected key=value, got '" + token.text + "'");
    }
    std::string key = token.text.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(record.line, token.column, "unknown key '" + key + "'");
    }
    if (values_.count(key)) {
      throw ParseError(record.line, token.column, "repeated key '" + key + "'");
    }
    values_.emplace(key, std::make_pair(token.text.substr(eq + 1),
                                        token.column + eq + 1));
  }
}

bool KeyValues::has(std::string_view key) const {
  return values_.find(key) != values_.end();
}

const std::string& KeyValues::require(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ParseError(record_->line, 0,
                     "missing required key '" + std::string(key) + "'");
  }
  return it->second.first;
}

std::optional<std::string> KeyValues::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second.first;
}

std::vector<std::string> KeyValues::list(std::string_view key) const {
  auto value = get(key);
  if (!value) return {};
  return split_list(*value);
}

std::size_t KeyValues::column_of(std::string_view key) const {
  auto it = values_.find(key);
  return it == values_.end() ? 0 : it->second.second;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> items;
  if (text.empty() || text == "-") return items;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos);
    items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return items;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace ilock
