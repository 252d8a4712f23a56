#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/enumerate.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"
#include "orchmach/rule_text.hpp"

namespace orchmach {

// Nondeterministic machine: every left side maps to a non-empty set of right sides.
class Ndtm {
 public:
  using RuleMap = std::map<LeftSide, std::vector<Action>>;

  Ndtm(std::string name, RuleMap rules) : name_(std::move(name)), rules_(std::move(rules)) {
    if (rules_.empty()) throw PreconditionError(name_ + ": an NDTM needs at least one left side");
    for (auto& [from, to] : rules_) {
      if (to.empty()) throw PreconditionError(name_ + ": left side (" + to_string(from) + ") has no right side");
      std::sort(to.begin(), to.end());
      to.erase(std::unique(to.begin(), to.end()), to.end());
    }
  }

  const std::string& name() const noexcept { return name_; }
  const RuleMap& rules() const noexcept { return rules_; }

  const std::vector<Action>* find(LeftSide f) const {
    const auto it = rules_.find(f);
    return it == rules_.end() ? nullptr : &it->second;
  }

  bool deterministic() const {
    return std::all_of(rules_.begin(), rules_.end(), [](const auto& kv) { return kv.second.size() == 1; });
  }

  std::set<LeftSide> left_sides() const {
    std::set<LeftSide> out;
    for (const auto& kv : rules_) out.insert(kv.first);
    return out;
  }

  std::uint64_t branch_points() const {
    return static_cast<std::uint64_t>(
        std::count_if(rules_.begin(), rules_.end(), [](const auto& kv) { return kv.second.size() > 1; }));
  }

  static Ndtm from_machine(const TuringMachine& m) {
    RuleMap rules;
    for (const Rule& r : m.rules()) rules[r.from].push_back(r.to);
    return Ndtm(m.name(), std::move(rules));
  }

 private:
  std::string name_;
  RuleMap rules_;
};

// Lines of the form "q,s -> q',w,d | q'',w'',d''"; repeated left sides merge.
inline Ndtm parse_ndtm(std::string_view text, std::string name = "ndtm") {
  Ndtm::RuleMap rules;
  for (RuleLine& l : parse_rule_lines(text)) {
    auto& to = rules[l.from];
    to.insert(to.end(), l.to.begin(), l.to.end());
  }
  if (rules.empty()) throw ParseError("NDTM text has no rules");
  return Ndtm(std::move(name), std::move(rules));
}

inline std::string format_ndtm(const Ndtm& m) {
  std::string out;
  for (const auto& [from, to] : m.rules()) {
    out += to_string(from) + " ->";
    for (std::size_t i = 0; i < to.size(); ++i) out += (i ? " | " : " ") + to_string(to[i]);
    out += '\n';
  }
  return out;
}

struct NdtmLeaf {
  std::uint64_t steps = 0;
  TapeWord word;

  friend auto operator<=>(const NdtmLeaf&, const NdtmLeaf&) = default;
};

struct NdtmCycle {
  std::uint64_t depth = 0;  // where the repeat was seen
  std::uint64_t first = 0;  // depth of the earlier identical configuration
};

struct NdtmExploration {
  std::set<NdtmLeaf> halting;
  std::vector<NdtmCycle> cycles;
  std::uint64_t nodes = 0;
  std::uint64_t frontier = 0;  // configurations left unexpanded at depth_cap
  bool truncated = false;      // node_cap hit

  bool complete() const noexcept { return !truncated && frontier == 0; }
};

// Breadth-first exploration of every choice sequence. A node whose translated
// configuration already occurs among its ancestors is a cycle witness; with
// prune_cycles it is not expanded further.
inline NdtmExploration ndtm_bounded_run(const Ndtm& m, std::span<const Symbol> word, std::uint64_t depth_cap,
                                        std::uint64_t node_cap, bool blank_background = false,
                                        bool prune_cycles = true) {
  if (depth_cap < 1 || node_cap < 1) throw PreconditionError("ndtm caps must be at least 1");
  struct Node {
    MachineConfig cfg;
    std::optional<std::size_t> parent;
    std::uint64_t depth = 0;
    std::string key;
  };
  NdtmExploration out;
  std::vector<Node> nodes;
  std::deque<std::size_t> queue;
  {
    Node root{MachineConfig::on_word(word, blank_background), std::nullopt, 0, {}};
    root.key = std::to_string(root.cfg.state) + "|" + root.cfg.tape.relative_key(root.cfg.head);
    nodes.push_back(std::move(root));
    queue.push_back(0);
  }
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    if (++out.nodes > node_cap) {
      out.truncated = true;
      break;
    }
    bool cycled = false;
    for (auto p = nodes[id].parent; p; p = nodes[*p].parent) {
      if (nodes[*p].key == nodes[id].key) {
        out.cycles.push_back(NdtmCycle{nodes[id].depth, nodes[*p].depth});
        cycled = true;
        break;
      }
    }
    if (cycled && prune_cycles) continue;
    const MachineConfig& c = nodes[id].cfg;
    const std::vector<Action>* alts = m.find(LeftSide{c.state, c.read()});
    if (alts == nullptr) {
      out.halting.insert(NdtmLeaf{nodes[id].depth, c.tape.word()});
      continue;
    }
    if (nodes[id].depth >= depth_cap) {
      ++out.frontier;
      continue;
    }
    for (const Action& a : *alts) {
      Node child{nodes[id].cfg, id, nodes[id].depth + 1, {}};
      child.cfg.tape.write(child.cfg.head, a.write);
      child.cfg.head += delta(a.move);
      child.cfg.state = a.next;
      ++child.cfg.steps;
      child.key = std::to_string(child.cfg.state) + "|" + child.cfg.tape.relative_key(child.cfg.head);
      nodes.push_back(std::move(child));
      queue.push_back(nodes.size() - 1);
    }
  }
  out.frontier += queue.size();
  return out;
}

// Splits nondeterministic left sides one at a time, in ascending
// (state, symbol) order, across every machine built so far. Members are named
// base#k; a deterministic input comes back as a one-member breed.
inline Breed decompose_to_breed(const Ndtm& m) {
  std::vector<Ndtm::RuleMap> machines{m.rules()};
  for (const auto& [from, to] : m.rules()) {
    if (to.size() < 2) continue;
    std::vector<Ndtm::RuleMap> next;
    next.reserve(machines.size() * to.size());
    for (const auto& rules : machines) {
      for (const Action& a : to) {
        Ndtm::RuleMap copy = rules;
        copy[from] = {a};
        next.push_back(std::move(copy));
      }
    }
    machines = std::move(next);
  }
  std::vector<TuringMachine> members;
  members.reserve(machines.size());
  const bool single = machines.size() == 1;
  for (std::size_t k = 0; k < machines.size(); ++k) {
    std::vector<Rule> rules;
    for (const auto& [from, to] : machines[k]) rules.push_back(Rule{from, to.front()});
    members.emplace_back(single ? m.name() : m.name() + "#" + std::to_string(k + 1), std::move(rules));
  }
  return Breed(m.name(), std::move(members));
}

inline bool check_uniform_leftsides(const Breed& breed) {
  if (breed.empty()) return true;
  const auto first = breed[0].left_sides();
  for (std::size_t i = 1; i < breed.size(); ++i)
    if (breed[i].left_sides() != first) return false;
  return true;
}

// The NDTM whose rule set is the union of the members' rules.
inline Ndtm union_ndtm(const Breed& breed) {
  Ndtm::RuleMap rules;
  for (const TuringMachine& m : breed.members())
    for (const Rule& r : m.rules()) rules[r.from].push_back(r.to);
  return Ndtm(breed.name(), std::move(rules));
}

struct EquivalenceVerdict {
  enum class Kind : std::uint8_t { equivalent, not_equivalent, inconclusive };
  Kind kind = Kind::inconclusive;
  std::optional<NdtmLeaf> differing;
  bool differing_in_ndtm = false;  // the differing leaf is reachable by the NDTM only
  std::string detail;
  std::set<NdtmLeaf> ndtm_leaves;
  std::set<NdtmLeaf> breed_leaves;
};

inline const char* to_string(EquivalenceVerdict::Kind k) {
  switch (k) {
    case EquivalenceVerdict::Kind::equivalent: return "equivalent";
    case EquivalenceVerdict::Kind::not_equivalent: return "not_equivalent";
    case EquivalenceVerdict::Kind::inconclusive: return "inconclusive";
  }
  return "?";
}

// Compares halting outcomes (steps, tape word) of the NDTM against those of
// the breed up to depth_cap. The breed's N counts the final empty round, so
// its leaf depth is N - 1.
inline EquivalenceVerdict verify_equivalence_bounded(const Ndtm& m, const Breed& breed, std::uint64_t depth_cap,
                                                     std::uint64_t node_cap = 2'000'000,
                                                     std::optional<std::vector<Symbol>> word = std::nullopt,
                                                     bool blank_background = false) {
  if (!check_uniform_leftsides(breed))
    throw PreconditionError("breed '" + breed.name() + "' members do not share one left-side set");
  EquivalenceVerdict v;
  const std::vector<Symbol> none;
  const NdtmExploration nd =
      ndtm_bounded_run(m, word ? std::span<const Symbol>(*word) : std::span<const Symbol>(none), depth_cap, node_cap,
                       blank_background, false);
  EnumerationBounds b;
  b.depth_cap = depth_cap;
  b.node_cap = node_cap;
  EngineSpec spec;
  spec.word = std::move(word);
  spec.blank_background = blank_background;
  spec.prune_cycles = false;
  const Enumeration en = enumerate_computations(breed, b, spec);

  v.ndtm_leaves = nd.halting;
  for (const Computation& c : en.computations) v.breed_leaves.insert(NdtmLeaf{c.N - 1, c.tape_word});

  if (nd.truncated || en.node_cap_hit) {
    v.kind = EquivalenceVerdict::Kind::inconclusive;
    v.detail = "node cap reached";
    return v;
  }
  for (const NdtmLeaf& l : v.ndtm_leaves) {
    if (!v.breed_leaves.contains(l)) {
      v.kind = EquivalenceVerdict::Kind::not_equivalent;
      v.differing = l;
      v.differing_in_ndtm = true;
      v.detail = "NDTM halts after " + std::to_string(l.steps) + " steps with '" + l.word + "', breed does not";
      return v;
    }
  }
  for (const NdtmLeaf& l : v.breed_leaves) {
    if (!v.ndtm_leaves.contains(l)) {
      v.kind = EquivalenceVerdict::Kind::not_equivalent;
      v.differing = l;
      v.detail = "breed halts after " + std::to_string(l.steps) + " steps with '" + l.word + "', NDTM does not";
      return v;
    }
  }
  v.kind = EquivalenceVerdict::Kind::equivalent;
  v.detail = "equal halting outcomes up to depth " + std::to_string(depth_cap);
  return v;
}

}  // namespace orchmach
