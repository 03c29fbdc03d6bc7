#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shiftforge/errors.hpp"
#include "shiftforge/rings.hpp"

namespace shiftforge::detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

/// A non-blank input line. For comments `tokens` holds the words after '#'.
struct Line {
  std::size_t number = 0;
  bool comment = false;
  std::vector<std::string> tokens;
};

inline std::vector<Line> read_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    std::size_t first = raw.find_first_not_of(" \t");
    if (first != std::string_view::npos) {
      Line line;
      line.number = number;
      if (raw[first] == '#') {
        line.comment = true;
        line.tokens = split_ws(raw.substr(first + 1));
      } else {
        line.tokens = split_ws(raw);
      }
      lines.push_back(std::move(line));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] inline void fail(const Line& line, const std::string& what) {
  throw FormatError("line " + std::to_string(line.number) + ": " + what);
}

inline std::uint64_t parse_count(const std::string& tok, const Line& line) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size()) fail(line, "bad count '" + tok + "'");
  return v;
}

inline RingElement parse_coef(const RingSpec& ring, const std::string& tok, const Line& line) {
  try {
    return parse_element(ring, tok);
  } catch (const FormatError& e) {
    fail(line, e.what());
  }
}

inline RingSpec parse_ring_line(const Line& line) {
  if (line.comment || line.tokens.empty() || line.tokens[0] != "ring")
    fail(line, "expected 'ring' line");
  if (line.tokens.size() == 2) return parse_ring_tokens(line.tokens[1], nullptr);
  if (line.tokens.size() == 3) {
    try {
      return parse_ring_tokens(line.tokens[1], &line.tokens[2]);
    } catch (const DomainError& e) {
      fail(line, e.what());
    }
  }
  fail(line, "malformed ring line");
}

/// Parses `vars <k> [name1 ... namek]`; names default to x1..xk.
inline std::vector<std::string> parse_vars_line(const Line& line) {
  if (line.comment || line.tokens.empty() || line.tokens[0] != "vars")
    fail(line, "expected 'vars' line");
  if (line.tokens.size() < 2) fail(line, "missing variable count");
  std::uint64_t k = parse_count(line.tokens[1], line);
  std::vector<std::string> names;
  if (line.tokens.size() == 2) {
    for (std::uint64_t i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
  } else if (line.tokens.size() == k + 2) {
    names.assign(line.tokens.begin() + 2, line.tokens.end());
  } else {
    fail(line, "vars line declares " + std::to_string(k) + " variables but lists " +
                   std::to_string(line.tokens.size() - 2) + " names");
  }
  return names;
}

inline std::string vars_line(const std::vector<std::string>& names) {
  std::string out = "vars " + std::to_string(names.size());
  for (const auto& n : names) out += " " + n;
  return out;
}

inline std::vector<std::string> default_names(std::size_t n, const std::string& prefix = "x",
                                              std::size_t first = 1) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(first + i));
  return names;
}

/// Parses "k=v" from a comment token; returns false when the key differs.
inline bool key_value(const std::string& tok, const std::string& key, std::string& value) {
  if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 || tok[key.size()] != '=')
    return false;
  value = tok.substr(key.size() + 1);
  return true;
}

}  // namespace shiftforge::detail
