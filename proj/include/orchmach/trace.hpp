#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "orchmach/symbols.hpp"

namespace orchmach {

// Non-increasing integer sequence stored as (value, repeat) runs. Alive counts
// of long runs are almost entirely one value, so this stays tiny.
class RunLengthSequence {
 public:
  void push(std::uint32_t value) {
    if (!runs_.empty() && runs_.back().first == value) {
      ++runs_.back().second;
    } else {
      runs_.emplace_back(value, 1);
    }
    ++size_;
    sum_ += value;
  }

  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::uint64_t sum() const noexcept { return sum_; }
  std::uint32_t front() const noexcept { return runs_.empty() ? 0 : runs_.front().first; }
  const std::vector<std::pair<std::uint32_t, std::uint64_t>>& runs() const noexcept { return runs_; }

  std::vector<std::uint32_t> expand() const {
    std::vector<std::uint32_t> out;
    out.reserve(size_);
    for (const auto& [v, n] : runs_) out.insert(out.end(), n, v);
    return out;
  }

  bool non_increasing() const noexcept {
    for (std::size_t i = 1; i < runs_.size(); ++i)
      if (runs_[i].first > runs_[i - 1].first) return false;
    return true;
  }

  friend bool operator==(const RunLengthSequence&, const RunLengthSequence&) = default;

 private:
  std::vector<std::pair<std::uint32_t, std::uint64_t>> runs_;
  std::uint64_t size_ = 0;
  std::uint64_t sum_ = 0;
};

enum class Termination : std::uint8_t {
  halted,            // every member removed; N is finite
  cap_reached,       // selection cap hit with rules still on offer
  script_exhausted,  // scripted/replay/choice-path policy ran out
};

struct Selection {
  std::uint32_t member = 0;
  Rule rule;

  friend bool operator==(const Selection&, const Selection&) = default;
};

// Outcome of one orchestrated run.
//
// `iterations` is the loop counter at exit; for a halted run that is N, and
// N = selections + 1 because the final round removes everybody and selects
// nothing. `alive_counts` holds card(M_n) for n = 2 .. N-1, i.e. the alive
// count at the start of every round from the third one on.
struct RunTrace {
  Termination termination = Termination::cap_reached;
  std::uint64_t iterations = 0;
  std::uint64_t selection_count = 0;
  RunLengthSequence alive_counts;
  bool selections_recorded = true;
  std::vector<Selection> selections;
  TapeWord tape_word;
  std::uint64_t ones = 0;
  std::vector<std::uint64_t> selected_counts;  // per member

  bool halted() const noexcept { return termination == Termination::halted; }
  std::optional<std::uint64_t> N() const noexcept {
    if (!halted()) return std::nullopt;
    return iterations;
  }

  // Alive count at n = 2; zero when the run ended before that round.
  std::uint32_t o2() const noexcept { return alive_counts.front(); }

  double o_mean() const noexcept {
    return alive_counts.empty() ? 0.0 : static_cast<double>(alive_counts.sum()) / static_cast<double>(alive_counts.size());
  }
  // Empty sequences count as mean 0.
  std::uint64_t o_mean_floor() const noexcept {
    return alive_counts.empty() ? 0 : alive_counts.sum() / alive_counts.size();
  }

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

// Halting run of a breed with more than one member whose alive count drops
// to one by n = 2.
inline bool is_quasi_trivial(const RunTrace& t, std::size_t breed_size) noexcept {
  return t.halted() && breed_size > 1 && t.alive_counts.size() > 0 && t.o2() == 1;
}

}  // namespace orchmach
