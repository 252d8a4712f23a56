#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"
#include "orchmach/policy.hpp"
#include "orchmach/trace.hpp"

namespace orchmach {

struct RunOptions {
  std::uint64_t cap = 1'000'000;  // maximum number of selections
  bool record_selections = true;
  std::uint64_t progress_every = 0;
  std::function<void(std::uint64_t selections)> on_progress;
};

// Configuration shared by all members under OM1/OM2: every alive member sees
// the same tape, head and control pair, so one copy is enough.
struct SharedConfig {
  Tape tape{Symbol::zero};
  std::int64_t head = 0;
  State state = 0;
  std::vector<std::uint32_t> alive;
  std::uint64_t n = 0;

  Symbol read() const noexcept { return tape.read(head); }
  LeftSide control() const noexcept { return LeftSide{state, read()}; }

  static SharedConfig initial(const Breed& breed) { return on_word(breed, {}, false); }

  // `word` surrounded by blanks with the head on its first letter. The empty
  // word keeps the all-zero OM1 tape unless blank_background is set.
  static SharedConfig on_word(const Breed& breed, std::span<const Symbol> word, bool blank_background) {
    for (Symbol s : word)
      if (s == Symbol::blank) throw PreconditionError("input words are binary");
    SharedConfig c;
    const MachineConfig m = MachineConfig::on_word(word, blank_background);
    c.tape = m.tape;
    c.alive.resize(breed.size());
    for (std::uint32_t i = 0; i < breed.size(); ++i) c.alive[i] = i;
    return c;
  }
};

// Applicable rules of the alive members for the current control pair, in
// member order. Alive members missing from the result halt this round.
inline std::vector<Candidate> applicable_rules(const Breed& breed, const SharedConfig& cfg) {
  std::vector<Candidate> offer;
  const LeftSide f = cfg.control();
  for (std::uint32_t i : cfg.alive)
    if (const Action* a = breed[i].find(f)) offer.push_back(Candidate{i, *a});
  return offer;
}

struct StepReport {
  std::optional<Selection> selected;
  std::vector<std::uint32_t> removed;
  bool exhausted = false;  // policy ran out; configuration untouched
};

// One round of the orchestrated loop on the shared configuration.
inline StepReport om1_step(const Breed& breed, SharedConfig& cfg, SelectionPolicy& policy) {
  if (cfg.alive.empty()) throw PreconditionError("om1_step on a configuration with no alive members");
  StepReport rep;
  const std::vector<Candidate> offer = applicable_rules(breed, cfg);
  std::optional<std::size_t> pick;
  if (!offer.empty()) {
    pick = policy.choose(offer, cfg.n);
    if (!pick) {
      rep.exhausted = true;
      return rep;
    }
  }
  std::vector<std::uint32_t> next_alive;
  std::size_t k = 0;
  for (std::uint32_t i : cfg.alive) {
    if (k < offer.size() && offer[k].member == i) {
      next_alive.push_back(i);
      ++k;
    } else {
      rep.removed.push_back(i);
    }
  }
  cfg.alive = std::move(next_alive);
  if (pick) {
    const Candidate& c = offer[*pick];
    rep.selected = Selection{c.member, Rule{cfg.control(), c.action}};
    cfg.tape.write(cfg.head, c.action.write);
    cfg.head += delta(c.action.move);
    cfg.state = c.action.next;
  }
  ++cfg.n;
  return rep;
}

namespace detail {

inline RunTrace run_shared(const Breed& breed, SharedConfig cfg, SelectionPolicy& policy, const RunOptions& opt) {
  if (breed.empty()) throw PreconditionError("cannot run an empty breed");
  RunTrace t;
  t.selections_recorded = opt.record_selections;
  t.selected_counts.assign(breed.size(), 0);

  std::vector<Candidate> offer;
  offer.reserve(breed.size());
  const TuringMachine* members = breed.members().data();

  for (;;) {
    const Symbol sym = cfg.tape.read(cfg.head);
    offer.clear();
    for (std::uint32_t i : cfg.alive)
      if (const Action* a = members[i].find(cfg.state, sym)) offer.push_back(Candidate{i, *a});

    if (offer.empty()) {
      if (cfg.n >= 2) t.alive_counts.push(static_cast<std::uint32_t>(cfg.alive.size()));
      cfg.alive.clear();
      ++cfg.n;
      t.termination = Termination::halted;
      break;
    }
    if (t.selection_count >= opt.cap) {
      t.termination = Termination::cap_reached;
      break;
    }
    const std::optional<std::size_t> pick = policy.choose(offer, t.selection_count);
    if (!pick) {
      t.termination = Termination::script_exhausted;
      break;
    }
    if (cfg.n >= 2) t.alive_counts.push(static_cast<std::uint32_t>(cfg.alive.size()));
    if (offer.size() != cfg.alive.size()) {
      cfg.alive.clear();
      for (const Candidate& c : offer) cfg.alive.push_back(c.member);
    }
    const Candidate& c = offer[*pick];
    if (opt.record_selections) t.selections.push_back(Selection{c.member, Rule{LeftSide{cfg.state, sym}, c.action}});
    ++t.selected_counts[c.member];
    cfg.tape.write(cfg.head, c.action.write);
    cfg.head += delta(c.action.move);
    cfg.state = c.action.next;
    ++cfg.n;
    ++t.selection_count;
    if (opt.progress_every && opt.on_progress && t.selection_count % opt.progress_every == 0)
      opt.on_progress(t.selection_count);
  }
  t.iterations = cfg.n;
  t.tape_word = cfg.tape.word();
  t.ones = cfg.tape.count(Symbol::one);
  return t;
}

}  // namespace detail

// OrchMach1: all-zero tape, control pair (0, 0).
inline RunTrace om1_run(const Breed& breed, SelectionPolicy& policy, const RunOptions& opt = {}) {
  return detail::run_shared(breed, SharedConfig::initial(breed), policy, opt);
}

// OrchMach2: same loop on a binary input word.
inline RunTrace om2_run(const Breed& breed, std::span<const Symbol> word, SelectionPolicy& policy,
                        const RunOptions& opt = {}, bool blank_background = false) {
  return detail::run_shared(breed, SharedConfig::on_word(breed, word, blank_background), policy, opt);
}

// OrchMach3: every member keeps its own tape, head and control pair; the
// selected right side is executed by every alive member on its own tape.
// The trace's tape word and ones come from the first member (in member order)
// still alive at the end.
inline RunTrace om3_run(const Breed& breed, const std::vector<std::vector<Symbol>>& inputs, SelectionPolicy& policy,
                        const RunOptions& opt = {}, bool blank_background = false) {
  if (breed.empty()) throw PreconditionError("cannot run an empty breed");
  if (inputs.size() != breed.size())
    throw PreconditionError("om3 needs one input word per member (" + std::to_string(breed.size()) + "), got " +
                            std::to_string(inputs.size()));
  std::vector<MachineConfig> cfgs;
  cfgs.reserve(inputs.size());
  for (const auto& w : inputs) {
    for (Symbol s : w)
      if (s == Symbol::blank) throw PreconditionError("input words are binary");
    cfgs.push_back(MachineConfig::on_word(w, blank_background));
  }
  std::vector<std::uint32_t> alive(breed.size());
  for (std::uint32_t i = 0; i < breed.size(); ++i) alive[i] = i;

  RunTrace t;
  t.selections_recorded = opt.record_selections;
  t.selected_counts.assign(breed.size(), 0);
  std::uint64_t n = 0;
  std::uint32_t reporter = 0;
  std::vector<Candidate> offer;

  for (;;) {
    offer.clear();
    for (std::uint32_t i : alive)
      if (const Action* a = breed[i].find(cfgs[i].state, cfgs[i].read())) offer.push_back(Candidate{i, *a});
    reporter = alive.front();
    if (offer.empty()) {
      if (n >= 2) t.alive_counts.push(static_cast<std::uint32_t>(alive.size()));
      ++n;
      t.termination = Termination::halted;
      break;
    }
    if (t.selection_count >= opt.cap) {
      t.termination = Termination::cap_reached;
      break;
    }
    const std::optional<std::size_t> pick = policy.choose(offer, t.selection_count);
    if (!pick) {
      t.termination = Termination::script_exhausted;
      break;
    }
    if (n >= 2) t.alive_counts.push(static_cast<std::uint32_t>(alive.size()));
    alive.clear();
    for (const Candidate& c : offer) alive.push_back(c.member);
    const Candidate& chosen = offer[*pick];
    if (opt.record_selections)
      t.selections.push_back(Selection{chosen.member, Rule{LeftSide{cfgs[chosen.member].state, cfgs[chosen.member].read()},
                                                           chosen.action}});
    ++t.selected_counts[chosen.member];
    for (std::uint32_t i : alive) {
      MachineConfig& m = cfgs[i];
      m.tape.write(m.head, chosen.action.write);
      m.head += delta(chosen.action.move);
      m.state = chosen.action.next;
    }
    ++n;
    ++t.selection_count;
    if (opt.progress_every && opt.on_progress && t.selection_count % opt.progress_every == 0)
      opt.on_progress(t.selection_count);
  }
  t.iterations = n;
  t.tape_word = cfgs[reporter].tape.word();
  t.ones = cfgs[reporter].tape.count(Symbol::one);
  return t;
}

// Selection log keyed by member name, so it can be replayed against a breed
// whose members are ordered differently.
struct LoggedSelection {
  std::string member;
  Rule rule;

  friend bool operator==(const LoggedSelection&, const LoggedSelection&) = default;
};

inline std::vector<LoggedSelection> selection_log(const Breed& breed, const RunTrace& trace) {
  if (!trace.selections_recorded) throw PreconditionError("trace was run without recording selections");
  std::vector<LoggedSelection> out;
  out.reserve(trace.selections.size());
  for (const Selection& s : trace.selections) out.push_back(LoggedSelection{breed[s.member].name(), s.rule});
  return out;
}

struct ReplayInput {
  std::optional<std::vector<Symbol>> word;  // OM2 input; OM1 when absent
  bool blank_background = false;
};

// Re-executes a logged run. A log shorter than the original run yields the
// prefix trace, terminated as script_exhausted.
inline RunTrace replay(const Breed& breed, std::span<const LoggedSelection> log, const ReplayInput& input = {},
                       std::uint64_t cap = UINT64_MAX) {
  std::vector<std::pair<std::uint32_t, Action>> script;
  script.reserve(log.size());
  for (std::size_t k = 0; k < log.size(); ++k) {
    const auto idx = breed.find(log[k].member);
    if (!idx) throw ReplayMismatch(k, "breed has no member named '" + log[k].member + "'");
    script.emplace_back(*idx, log[k].rule.to);
  }
  SelectionPolicy policy = SelectionPolicy::replay(std::move(script));
  RunOptions opt;
  opt.cap = cap;
  RunTrace t = input.word ? om2_run(breed, *input.word, policy, opt, input.blank_background) : om1_run(breed, policy, opt);
  for (std::size_t k = 0; k < t.selections.size(); ++k) {
    if (t.selections[k].rule != log[k].rule)
      throw ReplayMismatch(k, "rule " + to_string(t.selections[k].rule) + " differs from logged " +
                                  to_string(log[k].rule));
  }
  return t;
}

}  // namespace orchmach
