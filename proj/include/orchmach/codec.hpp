#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"

namespace orchmach {

// Rule-index notation: R followed by R (from, to) pairs, where
//   from = 2*state + symbol
//   to   = 6*state + 3*symbol + move   (move: 0 left, 1 stay, 2 right)
using RuleIndexCode = std::vector<std::uint64_t>;

inline LeftSide decode_from_index(std::uint64_t f) {
  return LeftSide{static_cast<State>(f / 2), static_cast<Symbol>(f % 2)};
}

inline Action decode_to_index(std::uint64_t t) {
  return Action{static_cast<State>(t / 6), static_cast<Symbol>((t % 6) / 3), static_cast<Move>(t % 3)};
}

inline std::uint64_t encode_from_index(const LeftSide& f) {
  return 2 * static_cast<std::uint64_t>(f.state) + static_cast<std::uint64_t>(f.read);
}

inline std::uint64_t encode_to_index(const Action& a) {
  return 6 * static_cast<std::uint64_t>(a.next) + 3 * static_cast<std::uint64_t>(a.write) +
         static_cast<std::uint64_t>(a.move);
}

inline TuringMachine decode_rule_index(const RuleIndexCode& code, std::string name = "tm") {
  if (code.empty()) throw MalformedCode("empty rule-index code");
  const std::uint64_t count = code[0];
  if (count > (code.size() - 1) / 2 || code.size() != 1 + 2 * count)
    throw MalformedCode("rule-index code declares " + std::to_string(count) + " rules but has " +
                        std::to_string(code.size() - 1) + " further numbers");
  std::vector<Rule> rules;
  rules.reserve(count);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t f = code[1 + 2 * i];
    const std::uint64_t t = code[2 + 2 * i];
    if (!seen.insert(f).second)
      throw NondeterministicCode("rule-index code repeats from-index " + std::to_string(f));
    if (f / 2 >= kMaxState || t / 6 >= kMaxState) throw MalformedCode("state number too large in rule-index code");
    rules.push_back(Rule{decode_from_index(f), decode_to_index(t)});
  }
  return TuringMachine(std::move(name), std::move(rules));
}

inline RuleIndexCode encode_rule_index(const TuringMachine& m) {
  if (!m.is_binary()) throw UnencodableMachine(m.name() + ": blank symbol has no rule-index encoding");
  RuleIndexCode code;
  code.reserve(1 + 2 * m.rule_count());
  code.push_back(m.rule_count());
  // rules() is sorted by (state, symbol), which is ascending from-index order.
  for (const Rule& r : m.rules()) {
    code.push_back(encode_from_index(r.from));
    code.push_back(encode_to_index(r.to));
  }
  return code;
}

// Accepts "9, 0,11, 1,15 ..." with commas and/or whitespace, optionally
// wrapped in parentheses.
inline RuleIndexCode parse_rule_index(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (!text.empty() && text.front() == '(') {
    if (text.back() != ')') throw MalformedCode("unbalanced parenthesis in rule-index code");
    text = trim(text.substr(1, text.size() - 2));
  }
  RuleIndexCode out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc{} || ptr == text.data() + i)
      throw MalformedCode("unexpected character '" + std::string(1, c) + "' in rule-index code");
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size() && text[i] != ',' && !std::isspace(static_cast<unsigned char>(text[i])))
      throw MalformedCode("unexpected character '" + std::string(1, text[i]) + "' in rule-index code");
    out.push_back(v);
  }
  return out;
}

inline std::string format_rule_index(const RuleIndexCode& code) {
  std::string out = "(";
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(code[i]);
  }
  return out + ")";
}

}  // namespace orchmach
