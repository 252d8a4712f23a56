#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/symbols.hpp"

namespace orchmach {

// Two-way unbounded tape backed by a dense buffer. Cells outside the buffer
// hold the background symbol. The buffer grows geometrically in whichever
// direction the head writes past its end.
class Tape {
 public:
  explicit Tape(Symbol background = Symbol::zero) : background_(background) {}

  // Places `word` at positions 0 .. |word|-1.
  Tape(std::span<const Symbol> word, Symbol background) : background_(background) {
    cells_.reserve(word.size() + 32);
    for (Symbol s : word) cells_.push_back(static_cast<std::uint8_t>(s));
  }

  Symbol background() const noexcept { return background_; }

  Symbol read(std::int64_t pos) const noexcept {
    const std::int64_t i = pos - origin_;
    if (i < 0 || i >= static_cast<std::int64_t>(cells_.size())) return background_;
    return static_cast<Symbol>(cells_[static_cast<std::size_t>(i)]);
  }

  void write(std::int64_t pos, Symbol s) {
    std::int64_t i = pos - origin_;
    if (i < 0 || i >= static_cast<std::int64_t>(cells_.size())) {
      if (s == background_) return;
      grow_to(pos);
      i = pos - origin_;
    }
    cells_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s);
  }

  std::uint64_t count(Symbol s) const noexcept {
    const auto raw = static_cast<std::uint8_t>(s);
    return static_cast<std::uint64_t>(std::count(cells_.begin(), cells_.end(), raw));
  }

  // Inclusive window between the leftmost and rightmost 1; empty if none.
  TapeWord word() const {
    const auto one = static_cast<std::uint8_t>(Symbol::one);
    const auto first = std::find(cells_.begin(), cells_.end(), one);
    if (first == cells_.end()) return {};
    const auto last = std::find(cells_.rbegin(), cells_.rend(), one).base();
    TapeWord out;
    out.reserve(static_cast<std::size_t>(last - first));
    for (auto it = first; it != last; ++it) out.push_back(to_char(static_cast<Symbol>(*it)));
    return out;
  }

  // Positions of the extreme non-background cells.
  std::optional<std::pair<std::int64_t, std::int64_t>> extent() const noexcept {
    const auto bg = static_cast<std::uint8_t>(background_);
    const auto first = std::find_if(cells_.begin(), cells_.end(), [bg](auto c) { return c != bg; });
    if (first == cells_.end()) return std::nullopt;
    const auto last = std::find_if(cells_.rbegin(), cells_.rend(), [bg](auto c) { return c != bg; });
    const std::int64_t lo = origin_ + (first - cells_.begin());
    const std::int64_t hi = origin_ + static_cast<std::int64_t>(cells_.size()) - 1 - (last - cells_.rbegin());
    return std::pair{lo, hi};
  }

  // True if every cell strictly past `pos` in direction `dir` is background.
  bool background_beyond(std::int64_t pos, Move dir) const noexcept {
    const auto ext = extent();
    if (!ext) return true;
    if (dir == Move::right) return ext->second <= pos;
    if (dir == Move::left) return ext->first >= pos;
    return false;
  }

  // Content key relative to `head`: equal keys mean the tapes agree up to a
  // translation that maps one head onto the other.
  std::string relative_key(std::int64_t head) const {
    std::string key;
    const auto ext = extent();
    if (!ext) return key;
    const std::int64_t offset = ext->first - head;
    key.append(std::to_string(offset));
    key.push_back(':');
    for (std::int64_t p = ext->first; p <= ext->second; ++p) key.push_back(to_char(read(p)));
    return key;
  }

  // Content key in absolute coordinates.
  std::string absolute_key() const { return relative_key(0); }

  friend bool operator==(const Tape& a, const Tape& b) {
    return a.background_ == b.background_ && a.absolute_key() == b.absolute_key();
  }

 private:
  void grow_to(std::int64_t pos) {
    const auto bg = static_cast<std::uint8_t>(background_);
    const auto size = static_cast<std::int64_t>(cells_.size());
    if (size == 0) {
      cells_.assign(64, bg);
      origin_ = pos - 32;
      return;
    }
    if (pos < origin_) {
      const std::int64_t need = origin_ - pos;
      const std::int64_t add = std::max(need + 16, size);
      cells_.insert(cells_.begin(), static_cast<std::size_t>(add), bg);
      origin_ -= add;
    } else {
      const std::int64_t need = pos - origin_ - size + 1;
      const std::int64_t add = std::max(need + 16, size);
      cells_.resize(cells_.size() + static_cast<std::size_t>(add), bg);
    }
  }

  std::vector<std::uint8_t> cells_;
  std::int64_t origin_ = 0;  // position of cells_[0]
  Symbol background_;
};

inline std::vector<Symbol> parse_word(std::string_view text) {
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) {
    Symbol s;
    if (!symbol_from_char(c, s)) throw ParseError("bad symbol in word: " + std::string(text));
    out.push_back(s);
  }
  return out;
}

}  // namespace orchmach
