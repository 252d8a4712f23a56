// Acceptance runner: one line per criterion, "criterion k: PASS|FAIL ...".
// Usage: acceptance [--criterion k]   (all criteria when omitted)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace orchmach;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  double limit_s;  // wall-clock budget
  std::function<Outcome()> run;
};

// 1 -------------------------------------------------------------------------

constexpr std::uint64_t kChampionSteps = 47'176'870;
constexpr std::uint64_t kChampionOnes = 4098;

Outcome champion() {
  const TuringMachine m = decode_rule_index(catalog::kChampionCode, "champion");
  const RunResult r = tm_run(m, 100'000'000);
  std::ostringstream d;
  d << "halted=" << r.halted() << " steps=" << r.steps << " (want " << kChampionSteps << ") ones=" << r.ones
    << " (want " << kChampionOnes << ")";
  return {r.halted() && r.steps == kChampionSteps && r.ones == kChampionOnes, d.str()};
}

// 2 -------------------------------------------------------------------------

constexpr std::uint64_t kVariantSteps = 70'740'809;

Outcome variant() {
  const TuringMachine m = decode_rule_index(catalog::kVariantCode, "variant");
  const RunResult r = tm_run(m, 100'000'000);
  SelectionPolicy p = SelectionPolicy::seeded_random(1);
  RunOptions opt;
  opt.cap = 100'000'000;
  opt.record_selections = false;
  const RunTrace t = om1_run(catalog::trivial(m), p, opt);
  const auto diff = static_cast<std::int64_t>(t.iterations) - static_cast<std::int64_t>(r.steps);
  std::ostringstream d;
  d << "steps=" << r.steps << " (want " << kVariantSteps << ") trivial-breed N=" << t.iterations << " (diff " << diff
    << ")";
  return {r.halted() && r.steps == kVariantSteps && t.halted() && diff >= -1 && diff <= 1, d.str()};
}

// 3 -------------------------------------------------------------------------

Outcome cd() {
  const Breed b = catalog::CD();
  const Enumeration e = enumerate_computations(b, {});
  bool all3 = !e.computations.empty();
  for (const auto& c : e.computations) all3 &= c.N == 3;
  const IqEqReport r = breed_iq_eq(b, {});
  const PurebredVerdict pv = purebred_check_om1(b, {});
  std::ostringstream d;
  d << "verdict=" << to_string(e.verdict) << " computations=" << e.computations.size() << " paths=" << e.path_count()
    << " allN3=" << all3 << " iq=" << r.iq_lower << " eq=" << r.eq_lower << " exact=" << r.exact
    << " purebred=" << to_string(pv.kind);
  return {e.verdict == Verdict::certified_convergent && e.computations.size() == 4 && e.path_count() == 4 && all3 &&
              r.iq_lower == 3 && r.eq_lower == 2 && r.exact && pv.kind == PurebredVerdict::Kind::purebred,
          d.str()};
}

// 4 -------------------------------------------------------------------------

Outcome cdg() {
  const PurebredVerdict pv = purebred_check_om1(catalog::CDG(), {});
  std::string w;
  for (const auto& n : pv.witness_members) w += (w.empty() ? "" : ",") + n;
  return {pv.kind == PurebredVerdict::Kind::not_purebred && pv.witness_members == std::vector<std::string>{"C", "D"},
          std::string("verdict=") + to_string(pv.kind) + " witness={" + w + "}"};
}

// 5 -------------------------------------------------------------------------

struct DivergenceEvidence {
  bool scripted_long = false;  // a scripted schedule reached K selections
  bool enum_witness = false;   // enumeration within 1000 nodes found a cycle or runaway
  std::string detail;
};

DivergenceEvidence divergence(const Breed& b, const std::vector<std::uint32_t>& pattern, std::uint64_t K) {
  DivergenceEvidence ev;
  std::ostringstream d;
  d << b.name() << ": ";
  std::vector<std::uint32_t> script;
  script.reserve(K);
  while (script.size() < K) script.push_back(pattern[script.size() % pattern.size()]);
  SelectionPolicy p = SelectionPolicy::scripted(std::move(script));
  RunOptions opt;
  opt.cap = K;
  opt.record_selections = false;
  try {
    const RunTrace t = om1_run(b, p, opt);
    ev.scripted_long = t.selection_count >= K;
    d << "scripted " << t.selection_count << " selections";
    if (t.halted()) d << " then halted (N=" << t.iterations << ")";
  } catch (const PolicyError& e) {
    d << "scripted schedule refused (" << e.what() << ")";
  }
  EnumerationBounds bounds;
  bounds.node_cap = 1000;
  const Enumeration e = enumerate_computations(b, bounds);
  std::uint64_t cycles = 0, runaways = 0, maxN = 0;
  for (const auto& w : e.witnesses) (w.kind == DivergenceWitness::Kind::cycle ? cycles : runaways)++;
  for (const auto& c : e.computations) maxN = std::max(maxN, c.N);
  ev.enum_witness = e.verdict == Verdict::divergent && cycles + runaways > 0;
  d << "; enumeration(" << e.nodes << " nodes) verdict=" << to_string(e.verdict) << " cycle_witnesses=" << cycles
    << " runaway_witnesses=" << runaways << " cycle_hits=" << e.cycle_hits << " maxN=" << maxN;
  ev.detail = d.str();
  return ev;
}

Outcome ab_ej() {
  constexpr std::uint64_t K = 1'000'000;
  // A repeated keeps the control pair at (0,0); E and J alternated is the
  // schedule that would keep both alive.
  const DivergenceEvidence ab = divergence(catalog::AB(), {0}, K);
  const DivergenceEvidence ej = divergence(catalog::EJ(), {0, 1}, K);
  const RunResult e = tm_run(catalog::E(), 1000);
  const RunResult j = tm_run(catalog::J(), 1000);
  const bool standalone = e.halted() && e.steps <= 1 && j.halted() && j.steps <= 1;
  std::ostringstream d;
  d << ab.detail << " | " << ej.detail << " | E halts after " << e.steps << ", J after " << j.steps;
  return {ab.scripted_long && ab.enum_witness && ej.scripted_long && ej.enum_witness && standalone, d.str()};
}

// 6 -------------------------------------------------------------------------

Outcome word0110() {
  EngineSpec spec;
  spec.word = parse_word("0110");
  const Enumeration xy = enumerate_computations(catalog::XY(), {}, spec);
  const Enumeration x = enumerate_computations(catalog::trivial(catalog::X()), {}, spec);
  const Enumeration y = enumerate_computations(catalog::trivial(catalog::Y()), {}, spec);
  auto rejected = [](const Enumeration& e) {
    return e.computations.empty() && e.resolved() && (e.cycle_hits > 0 || !e.witnesses.empty());
  };
  std::ostringstream d;
  d << "{X,Y} halting computations=" << xy.computations.size() << "; {X} " << to_string(x.verdict)
    << " cycles=" << x.cycle_hits << " halting=" << x.computations.size() << "; {Y} " << to_string(y.verdict)
    << " cycles=" << y.cycle_hits << " halting=" << y.computations.size();
  return {!xy.computations.empty() && rejected(x) && rejected(y), d.str()};
}

// 7 -------------------------------------------------------------------------

// Finite NDTM family: every one-state NDTM (each left side absent, one
// action, or a pair of distinct actions), plus every way to add at most two
// binary branch points to the 2- and 3-state busy beaver champions.
std::vector<Action> action_pool(unsigned states) {
  std::vector<Action> pool;
  for (State q = 0; q <= states; ++q)
    for (Symbol w : {Symbol::zero, Symbol::one})
      for (Move m : {Move::left, Move::stay, Move::right}) pool.push_back(Action{q, w, m});
  return pool;
}

std::vector<Ndtm> ndtm_family() {
  std::vector<Ndtm> out;
  {
    const auto pool = action_pool(1);
    std::vector<std::vector<Action>> options{{}};
    for (std::size_t i = 0; i < pool.size(); ++i) {
      options.push_back({pool[i]});
      for (std::size_t k = i + 1; k < pool.size(); ++k) options.push_back({pool[i], pool[k]});
    }
    for (const auto& r0 : options)
      for (const auto& r1 : options) {
        Ndtm::RuleMap rules;
        if (!r0.empty()) rules[LeftSide{0, Symbol::zero}] = r0;
        if (!r1.empty()) rules[LeftSide{0, Symbol::one}] = r1;
        if (!rules.empty()) out.emplace_back("n1", std::move(rules));
      }
  }
  const std::vector<std::pair<unsigned, TuringMachine>> bases{
      {2, catalog::from_text("bb2", "0,0 -> 1,1,R\n0,1 -> 1,1,L\n1,0 -> 0,1,L\n1,1 -> 2,1,R")},
      {3, catalog::from_text("bb3", "0,0 -> 1,1,R\n0,1 -> 3,1,R\n1,0 -> 2,0,R\n1,1 -> 1,1,R\n2,0 -> 2,1,L\n2,1 -> 0,1,L")},
  };
  for (const auto& [states, base] : bases) {
    const auto pool = action_pool(states);
    const Ndtm::RuleMap det = Ndtm::from_machine(base).rules();
    std::vector<LeftSide> sides;
    for (const auto& [f, to] : det) sides.push_back(f);
    auto alternatives = [&](LeftSide f) {
      std::vector<Action> alts;
      for (const Action& a : pool)
        if (a != det.at(f).front()) alts.push_back(a);
      return alts;
    };
    for (std::size_t i = 0; i < sides.size(); ++i) {
      for (const Action& a : alternatives(sides[i])) {
        Ndtm::RuleMap one = det;
        one[sides[i]].push_back(a);
        out.emplace_back(base.name(), one);
        for (std::size_t k = i + 1; k < sides.size(); ++k) {
          for (const Action& b : alternatives(sides[k])) {
            Ndtm::RuleMap two = one;
            two[sides[k]].push_back(b);
            out.emplace_back(base.name(), std::move(two));
          }
        }
      }
    }
  }
  return out;
}

Outcome decomposition() {
  const std::vector<Ndtm> family = ndtm_family();
  std::uint64_t uniform_fail = 0, equivalent = 0, not_equivalent = 0, inconclusive = 0;
  std::string first_bad;
  for (const Ndtm& m : family) {
    const Breed b = decompose_to_breed(m);
    if (!check_uniform_leftsides(b)) {
      ++uniform_fail;
      if (first_bad.empty()) first_bad = format_ndtm(m);
      continue;
    }
    const EquivalenceVerdict v = verify_equivalence_bounded(m, b, 12);
    switch (v.kind) {
      case EquivalenceVerdict::Kind::equivalent: ++equivalent; break;
      case EquivalenceVerdict::Kind::not_equivalent:
        ++not_equivalent;
        if (first_bad.empty()) first_bad = format_ndtm(m) + " " + v.detail;
        break;
      case EquivalenceVerdict::Kind::inconclusive: ++inconclusive; break;
    }
  }
  std::ostringstream d;
  d << "family=" << family.size() << " equivalent=" << equivalent << " not_equivalent=" << not_equivalent
    << " inconclusive=" << inconclusive << " non_uniform=" << uniform_fail;
  if (!first_bad.empty()) d << " first failure: " << first_bad;
  return {equivalent == family.size(), d.str()};
}

// 8 -------------------------------------------------------------------------

Outcome sweep() {
  std::mt19937_64 rng(20240801);
  std::uint64_t trace_mismatch = 0, tape_mismatch = 0, halted = 0;
  for (int i = 0; i < 1000; ++i) {
    const Breed b = oracle::random_breed(rng, 2 + static_cast<unsigned>(rng() % 4), 2, 0.85);
    const std::uint64_t seed = rng();
    SelectionPolicy fast_p = SelectionPolicy::seeded_random(seed);
    SelectionPolicy ref_p = SelectionPolicy::seeded_random(seed);
    RunOptions opt;
    opt.cap = 100;
    const RunTrace fast = om1_run(b, fast_p, opt);
    const ReferenceResult ref = reference_run(b, ref_p, 100);
    trace_mismatch += !(fast == ref.trace);
    tape_mismatch += !members_agree(ref);
    halted += fast.halted();
  }
  std::ostringstream d;
  d << "1000 breeds, trace mismatches=" << trace_mismatch << " tape disagreements=" << tape_mismatch
    << " (halted " << halted << ")";
  return {trace_mismatch == 0 && tape_mismatch == 0, d.str()};
}

// 9 -------------------------------------------------------------------------

bool prop_monotone() {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 500; ++i) {
    const Breed b = oracle::random_breed(rng, 2 + static_cast<unsigned>(rng() % 5), 3, 0.9);
    SelectionPolicy p = SelectionPolicy::seeded_random(i);
    RunOptions o;
    o.cap = 1000;
    if (!om1_run(b, p, o).alive_counts.non_increasing()) return false;
  }
  return true;
}

bool prop_seed_determinism() {
  std::mt19937_64 rng(92);
  for (int i = 0; i < 200; ++i) {
    const Breed b = oracle::random_breed(rng, 4, 3, 0.9);
    SelectionPolicy p1 = SelectionPolicy::seeded_random(i);
    SelectionPolicy p2 = SelectionPolicy::seeded_random(i);
    RunOptions o;
    o.cap = 2000;
    if (!(om1_run(b, p1, o) == om1_run(b, p2, o))) return false;
  }
  return true;
}

bool prop_parallel() {
  std::mt19937_64 rng(93);
  for (int i = 0; i < 10; ++i) {
    const Breed b = oracle::random_breed(rng, 4, 3, 0.85);
    ExperimentConfig c;
    c.episodes = 64;
    c.cap = 5000;
    c.baseline = true;
    c.jobs = 1;
    const ExperimentResult one = run_experiment(b, c);
    for (unsigned jobs : {2u, 3u, 8u}) {
      c.jobs = jobs;
      const ExperimentResult many = run_experiment(b, c);
      if (!(many.best == one.best) || !(many.episodes == one.episodes)) return false;
    }
  }
  return true;
}

bool prop_tables() {
  std::vector<Breed> breeds{catalog::CD(), catalog::CDG()};
  std::mt19937_64 rng(94);
  while (breeds.size() < 40) breeds.push_back(oracle::random_breed(rng, 3, 2, 0.75));
  EnumerationBounds bounds;
  bounds.depth_cap = 20;
  std::vector<ScorePoint> all;
  for (const Breed& b : breeds) {
    const Enumeration e = enumerate_computations(b, bounds);
    std::vector<ScorePoint> pts;
    for (const auto& c : e.computations) pts.push_back(ScorePoint{b.name(), c.N, c.o_mean_floor(), true});
    if (!tables_consistent(tabulate(pts))) return false;
    all.insert(all.end(), pts.begin(), pts.end());
  }
  return tables_consistent(tabulate(all)) &&
         tables_consistent(empirical_intelligence_tables(breeds, bounds, 0, 1, false));
}

// Words accepted by a member alone must be accepted by the breed. The member
// is followed first; failing that, any halting computation will do.
std::string prop_union_inclusion(bool& ok) {
  std::mt19937_64 rng(95);
  std::uint64_t checked = 0, violations = 0, proven = 0;
  std::string example;
  EnumerationBounds bounds;
  bounds.depth_cap = 64;
  bounds.node_cap = 200'000;
  const auto words = all_words(4);
  for (int i = 0; i < 50; ++i) {
    const Breed b = oracle::random_breed(rng, 2 + static_cast<unsigned>(rng() % 2), 2, 0.8, true);
    for (const TapeWord& tw : words) {
      const std::vector<Symbol> w = parse_word(tw);
      for (std::uint32_t m = 0; m < b.size(); ++m) {
        MachineConfig cfg = MachineConfig::on_word(w);
        if (!tm_run(b[m], cfg, TmRunOptions{64, false}).halted()) continue;
        ++checked;
        SelectionPolicy follow = SelectionPolicy::follow(m, 1);
        RunOptions o;
        o.cap = 1000;
        if (om2_run(b, w, follow, o).halted()) continue;
        EngineSpec spec;
        spec.word = w;
        const Enumeration e = enumerate_computations(b, bounds, spec);
        if (!e.computations.empty()) continue;
        ++violations;
        proven += e.resolved();
        if (example.empty() && e.resolved()) example = b[m].name() + " on '" + tw + "'";
      }
    }
  }
  ok = checked > 0 && violations == 0;
  std::ostringstream d;
  d << "union inclusion: " << checked << " member acceptances, " << violations << " not accepted by the breed ("
    << proven << " with every computation proven non-halting)";
  if (!example.empty()) d << ", e.g. " << example;
  return d.str();
}

Outcome properties() {
  const bool mono = prop_monotone();
  const bool seeds = prop_seed_determinism();
  const bool par = prop_parallel();
  const bool tables = prop_tables();
  bool incl = false;
  const std::string incl_detail = prop_union_inclusion(incl);
  std::ostringstream d;
  d << "monotone=" << mono << " seed_determinism=" << seeds << " parallel_independence=" << par
    << " table_consistency=" << tables << " " << incl_detail;
  return {mono && seeds && par && tables && incl, d.str()};
}

// 10 ------------------------------------------------------------------------

Outcome throughput() {
  const Breed b = catalog::trivial(catalog::champion());
  SelectionPolicy p = SelectionPolicy::seeded_random(1);
  RunOptions opt;
  opt.cap = 100'000'000;
  opt.record_selections = false;
  const auto t0 = std::chrono::steady_clock::now();
  const RunTrace t = om1_run(b, p, opt);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double per_min = static_cast<double>(t.selection_count) / s * 60.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu steps in %.2fs = %.3g steps/min (need 1e8)",
                static_cast<unsigned long long>(t.selection_count), s, per_min);
  return {per_min >= 1e8, buf};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, 60.0, champion},  {2, 90.0, variant},        {3, 1.0, cd},     {4, 1.0, cdg},          {5, 5.0, ab_ej},
      {6, 1.0, word0110},   {7, 60.0, decomposition}, {8, 30.0, sweep}, {9, 120.0, properties}, {10, 60.0, throughput},
  };
  return all;
}

bool run_one(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= c.limit_s;
  const bool pass = o.pass && in_time;
  char timing[96];
  std::snprintf(timing, sizeof timing, " [%.2fs, limit %.0fs%s]", s, c.limit_s, in_time ? "" : ", over budget");
  std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " " << o.detail << timing << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion k]\n";
      return 2;
    }
  }
  bool ok = true;
  bool found = false;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    found = true;
    ok &= run_one(c);
  }
  if (!found) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  return ok ? 0 : 1;
}
