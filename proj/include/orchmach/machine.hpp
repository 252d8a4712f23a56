#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/symbols.hpp"
#include "orchmach/tape.hpp"

namespace orchmach {

// Deterministic Turing machine with a partial transition function over
// {0, 1, blank}. The initial state is always 0.
class TuringMachine {
 public:
  TuringMachine() = default;

  TuringMachine(std::string name, std::vector<Rule> rules) : name_(std::move(name)), rules_(std::move(rules)) {
    std::sort(rules_.begin(), rules_.end());
    State top = 0;
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      const Rule& r = rules_[i];
      if (r.from.state >= kMaxState || r.to.next >= kMaxState)
        throw ParseError(name_ + ": state number too large in rule " + to_string(r));
      if (i > 0 && rules_[i - 1].from == r.from)
        throw NondeterministicCode(name_ + ": two rules for left side (" + to_string(r.from) + ")");
      top = std::max(top, r.from.state);
    }
    table_.assign(rules_.empty() ? 0 : (static_cast<std::size_t>(top) + 1) * 3, Slot{});
    for (const Rule& r : rules_) table_[index(r.from)] = Slot{r.to, true};
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const Rule> rules() const noexcept { return rules_; }
  std::size_t rule_count() const noexcept { return rules_.size(); }

  const Action* find(State state, Symbol read) const noexcept {
    const std::size_t i = static_cast<std::size_t>(state) * 3 + static_cast<std::size_t>(read);
    if (i >= table_.size() || !table_[i].present) return nullptr;
    return &table_[i].action;
  }
  const Action* find(const LeftSide& f) const noexcept { return find(f.state, f.read); }

  // Largest state mentioned on either side, plus one.
  State state_count() const noexcept {
    State top = 0;
    for (const Rule& r : rules_) top = std::max({top, r.from.state, r.to.next});
    return rules_.empty() ? 1 : top + 1;
  }

  bool is_binary() const noexcept {
    return std::none_of(rules_.begin(), rules_.end(), [](const Rule& r) {
      return r.from.read == Symbol::blank || r.to.write == Symbol::blank;
    });
  }

  std::vector<LeftSide> left_sides() const {
    std::vector<LeftSide> out;
    out.reserve(rules_.size());
    for (const Rule& r : rules_) out.push_back(r.from);
    return out;
  }

  // Structural equality: same rule set (names ignored).
  bool same_rules(const TuringMachine& other) const noexcept { return rules_ == other.rules_; }

 private:
  struct Slot {
    Action action;
    bool present = false;
  };

  static std::size_t index(const LeftSide& f) noexcept {
    return static_cast<std::size_t>(f.state) * 3 + static_cast<std::size_t>(f.read);
  }

  std::string name_;
  std::vector<Rule> rules_;  // sorted by left side
  std::vector<Slot> table_;
};

struct MachineConfig {
  Tape tape{Symbol::zero};
  std::int64_t head = 0;
  State state = 0;
  std::uint64_t steps = 0;

  Symbol read() const noexcept { return tape.read(head); }

  // Start configuration on `word` surrounded by blanks, head on its first
  // letter. The empty word gives an all-zero tape unless blank_background.
  static MachineConfig on_word(std::span<const Symbol> word, bool blank_background = false) {
    MachineConfig c;
    if (word.empty()) {
      c.tape = Tape(blank_background ? Symbol::blank : Symbol::zero);
    } else {
      c.tape = Tape(word, Symbol::blank);
    }
    return c;
  }
};

enum class StepOutcome : std::uint8_t { stepped, halted };

// One transition in place. On halt the configuration is left unchanged.
inline StepOutcome tm_step(const TuringMachine& m, MachineConfig& c) {
  const Action* a = m.find(c.state, c.read());
  if (a == nullptr) return StepOutcome::halted;
  c.tape.write(c.head, a->write);
  c.head += delta(a->move);
  c.state = a->next;
  ++c.steps;
  return StepOutcome::stepped;
}

inline TapeWord tape_word(const MachineConfig& c) { return c.tape.word(); }

enum class RunStatus : std::uint8_t { halted, cap_reached, cycle };

struct RunResult {
  RunStatus status = RunStatus::cap_reached;
  std::uint64_t steps = 0;
  std::uint64_t ones = 0;
  TapeWord tape_word;

  bool halted() const noexcept { return status == RunStatus::halted; }
};

struct TmRunOptions {
  std::uint64_t cap = 100'000'000;
  // Brent-style search for a repeated configuration (up to translation).
  // Costs a tape comparison whenever the state matches the saved one, so it is
  // meant for small machines.
  bool detect_cycles = false;
};

inline RunResult tm_run(const TuringMachine& m, MachineConfig& c, const TmRunOptions& opt) {
  RunResult res;
  std::uint64_t budget = opt.cap;

  State saved_state = c.state;
  std::string saved_key = opt.detect_cycles ? c.tape.relative_key(c.head) : std::string{};
  std::uint64_t power = 1, lam = 0;

  bool halted = false;
  while (budget > 0) {
    const Action* a = m.find(c.state, c.tape.read(c.head));
    if (a == nullptr) {
      halted = true;
      break;
    }
    c.tape.write(c.head, a->write);
    c.head += delta(a->move);
    c.state = a->next;
    ++c.steps;
    --budget;
    if (opt.detect_cycles) {
      ++lam;
      if (c.state == saved_state && c.tape.relative_key(c.head) == saved_key) {
        res.status = RunStatus::cycle;
        break;
      }
      if (lam == power) {
        saved_state = c.state;
        saved_key = c.tape.relative_key(c.head);
        power *= 2;
        lam = 0;
      }
    }
  }
  if (res.status != RunStatus::cycle) {
    if (!halted && m.find(c.state, c.tape.read(c.head)) == nullptr) halted = true;
    res.status = halted ? RunStatus::halted : RunStatus::cap_reached;
  }
  res.steps = c.steps;
  res.ones = c.tape.count(Symbol::one);
  res.tape_word = c.tape.word();
  return res;
}

inline RunResult tm_run(const TuringMachine& m, std::uint64_t cap) {
  MachineConfig c;
  return tm_run(m, c, TmRunOptions{cap, false});
}

inline RunResult tm_run(const TuringMachine& m, const TmRunOptions& opt) {
  MachineConfig c;
  return tm_run(m, c, opt);
}

}  // namespace orchmach
