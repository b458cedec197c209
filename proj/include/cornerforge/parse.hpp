#pragma once

// Line-oriented tokenizer for the plain-text file formats. Errors carry a
// 1-based line and column.

#include <charconv>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cornerforge {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, column, what); }

  std::int64_t as_int() const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail("expected integer, got '" + text + "'");
    return v;
  }
};

/// Reads non-empty, non-comment ('#') lines split on whitespace.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty line as tokens; false at end of input.
  bool next(std::vector<Token>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
        tokens.push_back({line.substr(i, j - i), line_no_, i + 1});
        i = j;
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

inline std::vector<std::int64_t> parse_int_list(std::string_view text, char sep = ',') {
  std::vector<std::int64_t> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(sep, i);
    if (j == std::string_view::npos) j = text.size();
    auto piece = text.substr(i, j - i);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
      throw std::invalid_argument("malformed integer list '" + std::string(text) + "'");
    out.push_back(v);
    i = j + 1;
  }
  return out;
}

}  // namespace cornerforge
