#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace orchmach {

using State = std::uint32_t;

// States are stored in dense lookup tables, so keep them bounded.
inline constexpr State kMaxState = 1u << 16;

enum class Symbol : std::uint8_t { zero = 0, one = 1, blank = 2 };

enum class Move : std::uint8_t { left = 0, stay = 1, right = 2 };

// A tape word as printed: '0', '1' and '_' for blank.
using TapeWord = std::string;

constexpr char to_char(Symbol s) noexcept {
  switch (s) {
    case Symbol::zero: return '0';
    case Symbol::one: return '1';
    case Symbol::blank: return '_';
  }
  return '?';
}

constexpr char to_char(Move m) noexcept {
  switch (m) {
    case Move::left: return 'L';
    case Move::stay: return 'S';
    case Move::right: return 'R';
  }
  return '?';
}

constexpr std::int64_t delta(Move m) noexcept {
  return static_cast<std::int64_t>(m) - 1;
}

constexpr bool symbol_from_char(char c, Symbol& out) noexcept {
  switch (c) {
    case '0': out = Symbol::zero; return true;
    case '1': out = Symbol::one; return true;
    case '_':
    case 'e':
    case 'b': out = Symbol::blank; return true;
    default: return false;
  }
}

constexpr bool move_from_char(char c, Move& out) noexcept {
  switch (c) {
    case 'L': case 'l': out = Move::left; return true;
    case 'S': case 's': case 'N': case 'n': out = Move::stay; return true;
    case 'R': case 'r': out = Move::right; return true;
    default: return false;
  }
}

// Left side of a transition rule: the control pair (state, read symbol).
struct LeftSide {
  State state = 0;
  Symbol read = Symbol::zero;

  friend constexpr auto operator<=>(const LeftSide&, const LeftSide&) = default;
};

// Right side of a transition rule.
struct Action {
  State next = 0;
  Symbol write = Symbol::zero;
  Move move = Move::stay;

  friend constexpr auto operator<=>(const Action&, const Action&) = default;
};

struct Rule {
  LeftSide from;
  Action to;

  friend constexpr auto operator<=>(const Rule&, const Rule&) = default;
};

inline std::string to_string(const LeftSide& f) {
  return std::to_string(f.state) + "," + to_char(f.read);
}

inline std::string to_string(const Action& a) {
  return std::to_string(a.next) + "," + to_char(a.write) + "," + to_char(a.move);
}

inline std::string to_string(const Rule& r) {
  return to_string(r.from) + " -> " + to_string(r.to);
}

}  // namespace orchmach
