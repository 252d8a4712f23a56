#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/policy.hpp"
#include "orchmach/trace.hpp"

namespace orchmach {

// Slow literal model of the orchestrated loop: every member owns a sparse tape,
// a head and a state, checks its own control pair and executes the selected
// right side on its own tape. Used to check the shared-tape engine and the
// claim that a single tape suffices.
struct MemberSnapshot {
  std::uint32_t member = 0;
  std::int64_t head = 0;
  State state = 0;
  std::string tape;  // absolute cells "pos:sym;" of every non-background cell

  friend bool operator==(const MemberSnapshot&, const MemberSnapshot&) = default;
};

struct ReferenceResult {
  RunTrace trace;
  // snapshots[k] holds the alive members after round k.
  std::vector<std::vector<MemberSnapshot>> snapshots;
};

namespace detail {

struct SparseMember {
  std::map<std::int64_t, Symbol> cells;
  Symbol background = Symbol::zero;
  std::int64_t head = 0;
  State state = 0;

  Symbol read() const {
    const auto it = cells.find(head);
    return it == cells.end() ? background : it->second;
  }
  void write(Symbol s) {
    if (s == background) {
      cells.erase(head);
    } else {
      cells[head] = s;
    }
  }
  std::string dump() const {
    std::string out;
    for (const auto& [p, s] : cells) out += std::to_string(p) + ":" + to_char(s) + ";";
    return out;
  }
  TapeWord word() const {
    std::optional<std::int64_t> lo, hi;
    for (const auto& [p, s] : cells) {
      if (s != Symbol::one) continue;
      if (!lo) lo = p;
      hi = p;
    }
    TapeWord out;
    if (!lo) return out;
    for (std::int64_t p = *lo; p <= *hi; ++p) {
      const auto it = cells.find(p);
      out.push_back(to_char(it == cells.end() ? background : it->second));
    }
    return out;
  }
  std::uint64_t ones() const {
    std::uint64_t n = 0;
    for (const auto& [p, s] : cells) n += (s == Symbol::one);
    return n;
  }
};

}  // namespace detail

inline ReferenceResult reference_run(const Breed& breed, SelectionPolicy& policy, std::uint64_t cap,
                                     std::optional<std::vector<Symbol>> word = std::nullopt,
                                     bool blank_background = false, bool keep_snapshots = true) {
  if (breed.empty()) throw PreconditionError("cannot run an empty breed");
  std::vector<detail::SparseMember> members(breed.size());
  for (auto& m : members) {
    if (word && !word->empty()) {
      m.background = Symbol::blank;
      for (std::size_t i = 0; i < word->size(); ++i) m.cells[static_cast<std::int64_t>(i)] = (*word)[i];
    } else {
      m.background = (word && blank_background) ? Symbol::blank : Symbol::zero;
    }
  }
  std::vector<bool> alive(breed.size(), true);
  ReferenceResult res;
  RunTrace& t = res.trace;
  t.selected_counts.assign(breed.size(), 0);
  std::uint64_t n = 0;
  std::uint32_t last_selected = 0;

  for (;;) {
    std::uint32_t alive_now = 0;
    std::vector<Candidate> offer;
    for (std::uint32_t i = 0; i < breed.size(); ++i) {
      if (!alive[i]) continue;
      ++alive_now;
      if (const Action* a = breed[i].find(members[i].state, members[i].read())) offer.push_back(Candidate{i, *a});
    }
    if (offer.empty()) {
      if (n >= 2) t.alive_counts.push(alive_now);
      ++n;
      t.termination = Termination::halted;
      break;
    }
    if (t.selection_count >= cap) {
      t.termination = Termination::cap_reached;
      break;
    }
    const auto pick = policy.choose(offer, t.selection_count);
    if (!pick) {
      t.termination = Termination::script_exhausted;
      break;
    }
    if (n >= 2) t.alive_counts.push(alive_now);
    std::vector<bool> next(breed.size(), false);
    for (const Candidate& c : offer) next[c.member] = true;
    alive = next;

    const Candidate chosen = offer[*pick];
    detail::SparseMember& g = members[chosen.member];
    t.selections.push_back(Selection{chosen.member, Rule{LeftSide{g.state, g.read()}, chosen.action}});
    ++t.selected_counts[chosen.member];
    last_selected = chosen.member;
    for (std::uint32_t i = 0; i < breed.size(); ++i) {
      if (!alive[i]) continue;
      detail::SparseMember& m = members[i];
      m.write(chosen.action.write);
      m.head += delta(chosen.action.move);
      m.state = chosen.action.next;
    }
    if (keep_snapshots) {
      std::vector<MemberSnapshot> snap;
      for (std::uint32_t i = 0; i < breed.size(); ++i)
        if (alive[i]) snap.push_back(MemberSnapshot{i, members[i].head, members[i].state, members[i].dump()});
      res.snapshots.push_back(std::move(snap));
    }
    ++n;
    ++t.selection_count;
  }
  t.iterations = n;
  t.tape_word = members[last_selected].word();
  t.ones = members[last_selected].ones();
  return res;
}

// True when, after every round, all alive members agree on tape, head and state.
inline bool members_agree(const ReferenceResult& r) {
  for (const auto& round : r.snapshots) {
    for (std::size_t i = 1; i < round.size(); ++i) {
      if (round[i].head != round[0].head || round[i].state != round[0].state || round[i].tape != round[0].tape)
        return false;
    }
  }
  return true;
}

}  // namespace orchmach
