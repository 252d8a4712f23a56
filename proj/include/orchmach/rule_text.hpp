#pragma once

#include <cctype>
#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"

namespace orchmach {

// Text form of transition rules, one left side per line:
//
//   q,s -> q',w,d | q'',w'',d''
//
// s and w are 0, 1 or _ (blank); d is L, S or R. Text after '#' is ignored.
struct RuleLine {
  LeftSide from;
  std::vector<Action> to;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return parts;
}

inline State parse_state(std::string_view s, std::string_view line) {
  State v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v >= kMaxState)
    throw ParseError("bad state '" + std::string(s) + "' in rule: " + std::string(line));
  return v;
}

inline Symbol parse_symbol(std::string_view s, std::string_view line) {
  Symbol out;
  if (s.size() != 1 || !symbol_from_char(s[0], out))
    throw ParseError("bad symbol '" + std::string(s) + "' in rule: " + std::string(line));
  return out;
}

}  // namespace detail

inline RuleLine parse_rule_line(std::string_view line) {
  const auto arrow = line.find("->");
  if (arrow == std::string_view::npos) throw ParseError("missing '->' in rule: " + std::string(line));
  const auto lhs = detail::split(detail::trim(line.substr(0, arrow)), ',');
  if (lhs.size() != 2) throw ParseError("left side must be 'state,symbol': " + std::string(line));
  RuleLine out;
  out.from = LeftSide{detail::parse_state(lhs[0], line), detail::parse_symbol(lhs[1], line)};
  for (std::string_view alt : detail::split(line.substr(arrow + 2), '|')) {
    const auto parts = detail::split(alt, ',');
    Move d;
    if (parts.size() != 3 || parts[2].size() != 1 || !move_from_char(parts[2][0], d))
      throw ParseError("right side must be 'state,symbol,L|S|R': " + std::string(line));
    out.to.push_back(Action{detail::parse_state(parts[0], line), detail::parse_symbol(parts[1], line), d});
  }
  return out;
}

inline std::vector<RuleLine> parse_rule_lines(std::string_view text) {
  std::vector<RuleLine> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (!line.empty()) out.push_back(parse_rule_line(line));
    start = end + 1;
  }
  return out;
}

// Deterministic machine from rule lines; any line with alternatives is rejected.
inline TuringMachine machine_from_rule_lines(std::string name, const std::vector<RuleLine>& lines) {
  std::vector<Rule> rules;
  for (const RuleLine& l : lines) {
    if (l.to.size() != 1)
      throw NondeterministicCode(name + ": left side (" + to_string(l.from) + ") has several right sides");
    rules.push_back(Rule{l.from, l.to.front()});
  }
  return TuringMachine(std::move(name), std::move(rules));
}

inline std::vector<std::string> format_rule_lines(const TuringMachine& m) {
  std::vector<std::string> out;
  for (const Rule& r : m.rules()) out.push_back(to_string(r));
  return out;
}

}  // namespace orchmach
