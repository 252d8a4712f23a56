#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/tape.hpp"

namespace orchmach {

// Every verdict computed from an enumeration is qualified by these bounds.
struct EnumerationBounds {
  std::uint64_t depth_cap = 64;        // selections per computation
  std::uint64_t node_cap = 1'000'000;  // rounds expanded in total
  std::uint64_t word_length_cap = 4;   // longest word probed for languages
  std::uint64_t cycle_depth = 4096;    // configurations deeper than this are not remembered

  void validate() const {
    if (depth_cap < 1 || node_cap < 1 || word_length_cap < 1 || cycle_depth < 1)
      throw PreconditionError("enumeration bounds must all be at least 1");
  }
};

// One halting computation found by the enumeration.
struct Computation {
  std::uint64_t N = 0;
  std::uint32_t o2 = 0;
  std::uint64_t o_sum = 0;
  std::uint64_t o_count = 0;
  TapeWord tape_word;
  std::uint64_t ones = 0;
  // Member chosen at each selection (first member offering that right side).
  // Left empty past kPathLimit selections.
  std::vector<std::uint32_t> path;
  // Member-level choice sequences that collapse onto this computation because
  // several members offered the same right side.
  std::uint64_t multiplicity = 1;

  static constexpr std::size_t kPathLimit = 1 << 16;

  std::uint64_t o_mean_floor() const noexcept { return o_count == 0 ? 0 : o_sum / o_count; }
  double o_mean() const noexcept {
    return o_count == 0 ? 0.0 : static_cast<double>(o_sum) / static_cast<double>(o_count);
  }
};

struct DivergenceWitness {
  enum class Kind : std::uint8_t {
    cycle,    // configuration repeats (up to translation) along one path
    runaway,  // a member's rule keeps the control pair fixed while the head
              // walks into untouched background: choosing it forever never halts
  };
  Kind kind = Kind::cycle;
  std::vector<std::uint32_t> prefix;  // choices leading to the witnessing round
  std::uint64_t depth = 0;
  std::uint64_t cycle_start = 0;  // cycle: depth of the earlier occurrence
  std::uint32_t member = 0;       // runaway: the member to repeat
};

enum class Verdict : std::uint8_t { certified_convergent, divergent, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_convergent: return "certified_convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

struct Enumeration {
  std::vector<Computation> computations;
  std::vector<DivergenceWitness> witnesses;
  std::uint64_t nodes = 0;
  std::uint64_t frontier = 0;  // paths cut at depth_cap
  std::uint64_t cycle_hits = 0;
  bool node_cap_hit = false;
  Verdict verdict = Verdict::unknown;

  // Every halting tape word reachable has been found (cycle pruning keeps
  // this true: a repeated configuration only reaches words already explored).
  bool resolved() const noexcept { return frontier == 0 && !node_cap_hit; }

  std::set<TapeWord> halting_words() const {
    std::set<TapeWord> out;
    for (const auto& c : computations) out.insert(c.tape_word);
    return out;
  }

  std::uint64_t path_count() const noexcept {
    std::uint64_t n = 0;
    for (const auto& c : computations) n += c.multiplicity;
    return n;
  }
};

struct EngineSpec {
  std::optional<std::vector<Symbol>> word;  // OM2 input; OM1 when absent
  bool blank_background = false;
  // Stop a path when its configuration repeats. Turning this off keeps every
  // halting leaf within depth_cap, which exact outcome comparisons need.
  bool prune_cycles = true;
  std::size_t max_witnesses = 16;
};

namespace detail {

struct EnumNode {
  Tape tape{Symbol::zero};
  std::int64_t head = 0;
  State state = 0;
  std::uint64_t alive = 0;
  std::uint64_t depth = 0;
  std::uint64_t o_sum = 0;
  std::uint64_t o_count = 0;
  std::uint32_t o2 = 0;
  std::uint64_t multiplicity = 1;
  std::vector<std::uint32_t> path;
};

struct ChoiceGroup {
  Action action;
  std::uint32_t member = 0;
  std::uint64_t count = 0;
};

struct EnumFrame {
  EnumNode node;
  std::vector<ChoiceGroup> groups;
  std::size_t next = 1;
};

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

inline void apply(EnumNode& n, const ChoiceGroup& g) {
  n.tape.write(n.head, g.action.write);
  n.head += delta(g.action.move);
  n.state = g.action.next;
  n.multiplicity = saturating_mul(n.multiplicity, g.count);
  if (n.path.size() < Computation::kPathLimit) n.path.push_back(g.member);
  ++n.depth;
}

}  // namespace detail

// Depth-first exploration of the whole choice tree of an OM1/OM2 run. Members
// offering the same right side lead to the same configuration, so each node
// branches once per distinct right side. Breeds are limited to 64 members.
inline Enumeration enumerate_computations(const Breed& breed, const EnumerationBounds& bounds,
                                          const EngineSpec& engine = {}) {
  bounds.validate();
  if (breed.empty()) throw PreconditionError("cannot enumerate an empty breed");
  if (breed.size() > 64) throw PreconditionError("enumeration supports at most 64 members");

  Enumeration out;
  detail::EnumNode cur;
  {
    const std::vector<Symbol> none;
    const SharedConfig init = SharedConfig::on_word(breed, engine.word ? std::span<const Symbol>(*engine.word)
                                                                      : std::span<const Symbol>(none),
                                                    engine.blank_background);
    cur.tape = init.tape;
  }
  cur.alive = breed.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << breed.size()) - 1;
  const Symbol background = cur.tape.background();

  std::vector<detail::EnumFrame> stack;
  std::unordered_map<std::string, std::uint64_t> on_path;
  std::vector<std::optional<std::string>> path_keys;  // index = depth
  std::vector<detail::ChoiceGroup> groups;

  auto make_key = [](const detail::EnumNode& n) {
    return std::to_string(n.state) + "|" + std::to_string(n.alive) + "|" + n.tape.relative_key(n.head);
  };
  // Keep remembered configurations for depths below `size` only.
  auto truncate_keys = [&](std::uint64_t size) {
    while (path_keys.size() > size) {
      if (path_keys.back()) on_path.erase(*path_keys.back());
      path_keys.pop_back();
    }
  };

  // Returns false when the node's subtree is finished.
  auto expand = [&](detail::EnumNode& n) -> bool {
    if (++out.nodes > bounds.node_cap) {
      out.node_cap_hit = true;
      return false;
    }
    truncate_keys(n.depth);
    if (n.depth < bounds.cycle_depth) {
      std::string key = make_key(n);
      const auto hit = on_path.find(key);
      if (hit != on_path.end()) {
        ++out.cycle_hits;
        if (out.witnesses.size() < engine.max_witnesses)
          out.witnesses.push_back(
              DivergenceWitness{DivergenceWitness::Kind::cycle, n.path, n.depth, hit->second, 0});
        if (engine.prune_cycles) return false;
        path_keys.resize(n.depth + 1);
      } else {
        on_path.emplace(key, n.depth);
        path_keys.resize(n.depth);
        path_keys.emplace_back(std::move(key));
      }
    }

    const Symbol sym = n.tape.read(n.head);
    const auto card = static_cast<std::uint32_t>(std::popcount(n.alive));
    if (n.depth >= 2) {
      n.o_sum += card;
      ++n.o_count;
      if (n.depth == 2) n.o2 = card;
    }

    groups.clear();
    std::uint64_t next_alive = 0;
    for (std::uint64_t bits = n.alive; bits != 0; bits &= bits - 1) {
      const auto i = static_cast<std::uint32_t>(std::countr_zero(bits));
      const Action* a = breed[i].find(n.state, sym);
      if (a == nullptr) continue;
      next_alive |= std::uint64_t{1} << i;
      bool merged = false;
      for (auto& g : groups) {
        if (g.action == *a) {
          ++g.count;
          merged = true;
          break;
        }
      }
      if (!merged) groups.push_back(detail::ChoiceGroup{*a, i, 1});
    }

    if (groups.empty()) {
      Computation c;
      c.N = n.depth + 1;
      c.o2 = n.o2;
      c.o_sum = n.o_sum;
      c.o_count = n.o_count;
      c.tape_word = n.tape.word();
      c.ones = n.tape.count(Symbol::one);
      c.path = n.path;
      c.multiplicity = n.multiplicity;
      out.computations.push_back(std::move(c));
      return false;
    }
    if (n.depth >= bounds.depth_cap) {
      ++out.frontier;
      return false;
    }
    if (sym == background && out.witnesses.size() < engine.max_witnesses) {
      for (const auto& g : groups) {
        if (g.action.next == n.state && g.action.move != Move::stay &&
            n.tape.background_beyond(n.head, g.action.move)) {
          out.witnesses.push_back(
              DivergenceWitness{DivergenceWitness::Kind::runaway, n.path, n.depth, 0, g.member});
          break;
        }
      }
    }
    n.alive = next_alive;
    if (groups.size() > 1) stack.push_back(detail::EnumFrame{n, groups, 1});
    detail::apply(n, groups.front());
    return true;
  };

  bool live = true;
  while (live) {
    while (expand(cur)) {
    }
    if (out.node_cap_hit) break;
    live = false;
    while (!stack.empty()) {
      detail::EnumFrame& f = stack.back();
      if (f.next >= f.groups.size()) {
        stack.pop_back();
        continue;
      }
      const detail::ChoiceGroup g = f.groups[f.next++];
      if (f.next >= f.groups.size()) {
        cur = std::move(f.node);
        stack.pop_back();
      } else {
        cur = f.node;
      }
      truncate_keys(cur.depth + 1);
      detail::apply(cur, g);
      live = true;
      break;
    }
  }

  if (!out.witnesses.empty()) {
    out.verdict = Verdict::divergent;
  } else if (out.resolved() && out.cycle_hits == 0) {
    out.verdict = Verdict::certified_convergent;
  } else {
    out.verdict = Verdict::unknown;
  }
  return out;
}

}  // namespace orchmach
