#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/enumerate.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/policy.hpp"

namespace orchmach {

struct IqEqReport {
  std::string breed;
  bool found = false;  // at least one halting computation seen
  std::uint64_t iq_lower = 0;
  std::uint64_t eq_lower = 0;
  double mean_max = 0.0;  // unfloored mean of the eq witness
  bool exact = false;     // maxima over every computation
  Verdict verdict = Verdict::unknown;
  std::optional<Computation> iq_witness;
  std::optional<Computation> eq_witness;
  std::uint64_t sampled = 0;  // random runs added on top of the enumeration
  EnumerationBounds bounds;
};

namespace detail {

inline Computation from_trace(const RunTrace& t) {
  Computation c;
  c.N = t.iterations;
  c.o2 = t.o2();
  c.o_sum = t.alive_counts.sum();
  c.o_count = t.alive_counts.size();
  c.tape_word = t.tape_word;
  c.ones = t.ones;
  if (t.selections.size() <= Computation::kPathLimit)
    for (const Selection& s : t.selections) c.path.push_back(s.member);
  return c;
}

inline void absorb(IqEqReport& r, const Computation& c) {
  if (!r.found || c.N > r.iq_lower) {
    r.iq_lower = c.N;
    r.iq_witness = c;
  }
  if (!r.found || c.o_mean_floor() > r.eq_lower) {
    r.eq_lower = c.o_mean_floor();
    r.mean_max = c.o_mean();
    r.eq_witness = c;
  }
  r.found = true;
}

inline RunTrace engine_run(const Breed& breed, const EngineSpec& spec, SelectionPolicy& policy, std::uint64_t cap) {
  RunOptions opt;
  opt.cap = cap;
  opt.record_selections = cap <= Computation::kPathLimit;
  if (spec.word) return om2_run(breed, *spec.word, policy, opt, spec.blank_background);
  return om1_run(breed, policy, opt);
}

}  // namespace detail

// iq = max N and eq = max floor(mean o) over the breed's halting computations.
// A one-member breed has a single computation and is simply run. Otherwise
// the choice tree is enumerated; when that is cut short, `samples` seeded
// random runs can raise the lower bounds further.
inline IqEqReport breed_iq_eq(const Breed& breed, const EnumerationBounds& bounds, const EngineSpec& spec = {},
                              std::uint64_t samples = 0, std::uint64_t seed = 1) {
  bounds.validate();
  IqEqReport r;
  r.breed = breed.name();
  r.bounds = bounds;
  if (breed.size() == 1) {
    SelectionPolicy p = SelectionPolicy::seeded_random(seed);
    const RunTrace t = detail::engine_run(breed, spec, p, bounds.depth_cap);
    if (t.halted()) {
      detail::absorb(r, detail::from_trace(t));
      r.exact = true;
      r.verdict = Verdict::certified_convergent;
    }
    return r;
  }
  const Enumeration en = enumerate_computations(breed, bounds, spec);
  r.verdict = en.verdict;
  for (const Computation& c : en.computations) detail::absorb(r, c);
  r.exact = en.verdict == Verdict::certified_convergent;
  if (!r.exact) {
    for (std::uint64_t i = 0; i < samples; ++i) {
      SelectionPolicy p = SelectionPolicy::seeded_random(seed + i);
      const RunTrace t = detail::engine_run(breed, spec, p, bounds.depth_cap);
      if (t.halted()) detail::absorb(r, detail::from_trace(t));
    }
    r.sampled = samples;
  }
  return r;
}

inline IqEqReport w_iq_eq(const Breed& breed, const std::vector<Symbol>& w, const EnumerationBounds& bounds,
                          std::uint64_t samples = 0, std::uint64_t seed = 1) {
  EngineSpec spec;
  spec.word = w;
  return breed_iq_eq(breed, bounds, spec, samples, seed);
}

struct PurebredVerdict {
  enum class Kind : std::uint8_t { purebred, not_purebred, unknown };
  Kind kind = Kind::unknown;
  std::optional<std::uint64_t> witness_mask;
  std::vector<std::string> witness_members;
  std::string detail;
};

inline const char* to_string(PurebredVerdict::Kind k) {
  switch (k) {
    case PurebredVerdict::Kind::purebred: return "purebred";
    case PurebredVerdict::Kind::not_purebred: return "not_purebred";
    case PurebredVerdict::Kind::unknown: return "unknown";
  }
  return "?";
}

namespace detail {

constexpr std::size_t kMaxSubsetMembers = 20;

// Proper non-empty subsets, largest first, ascending mask within a size.
inline std::vector<std::uint64_t> proper_subsets(std::size_t n) {
  if (n > kMaxSubsetMembers)
    throw PreconditionError("subset search supports at most " + std::to_string(kMaxSubsetMembers) + " members");
  std::vector<std::uint64_t> masks;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t m = 1; m < full; ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) > std::popcount(b); });
  return masks;
}

inline PurebredVerdict witness(const Breed& breed, std::uint64_t mask, std::string detail) {
  PurebredVerdict v;
  v.kind = PurebredVerdict::Kind::not_purebred;
  v.witness_mask = mask;
  v.witness_members = breed.subset(mask).member_names();
  v.detail = std::move(detail);
  return v;
}

}  // namespace detail

// Not purebred when some proper non-empty subset halts with exactly the same
// set of tape words. Requires the breed itself to be certified convergent.
inline PurebredVerdict purebred_check_om1(const Breed& breed, const EnumerationBounds& bounds) {
  PurebredVerdict v;
  const Enumeration whole = enumerate_computations(breed, bounds);
  if (whole.verdict != Verdict::certified_convergent) {
    v.detail = std::string("breed is ") + to_string(whole.verdict) + " within bounds";
    return v;
  }
  const std::set<TapeWord> target = whole.halting_words();
  bool inconclusive = false;
  for (std::uint64_t mask : detail::proper_subsets(breed.size())) {
    const Breed sub = breed.subset(mask);
    const Enumeration e = enumerate_computations(sub, bounds);
    if (!e.resolved()) {
      // Words found so far are real outputs; one outside the target settles it.
      const std::set<TapeWord> seen = e.halting_words();
      if (std::includes(target.begin(), target.end(), seen.begin(), seen.end())) inconclusive = true;
      continue;
    }
    if (e.halting_words() == target)
      return detail::witness(breed, mask, sub.name() + " halts with the same tape words");
  }
  if (inconclusive) {
    v.detail = "some subsets were cut off by the bounds";
    return v;
  }
  v.kind = PurebredVerdict::Kind::purebred;
  v.detail = "no proper subset reproduces the halting tape words";
  return v;
}

struct LanguageReport {
  std::set<TapeWord> accepted;
  std::set<TapeWord> rejected;      // every computation proven not to halt
  std::set<TapeWord> undetermined;  // bounds hit before a decision

  bool complete() const noexcept { return undetermined.empty(); }
};

// Every binary word of length 0..max_len, shortest first.
inline std::vector<TapeWord> all_words(std::uint64_t max_len) {
  std::vector<TapeWord> out{TapeWord{}};
  std::size_t level_begin = 0;
  for (std::uint64_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      out.push_back(out[i] + '0');
      out.push_back(out[i] + '1');
    }
    level_begin = level_end;
  }
  return out;
}

// Words (|w| <= word_length_cap, or the given list) on which some computation
// halts within depth_cap.
inline LanguageReport recognized_language_bounded(const Breed& breed, const EnumerationBounds& bounds,
                                                  const std::vector<TapeWord>* words = nullptr,
                                                  bool blank_background = false) {
  bounds.validate();
  const std::vector<TapeWord> domain = words ? *words : all_words(bounds.word_length_cap);
  LanguageReport out;
  for (const TapeWord& w : domain) {
    EngineSpec spec;
    spec.word = parse_word(w);
    spec.blank_background = blank_background;
    spec.max_witnesses = 1;
    const Enumeration e = enumerate_computations(breed, bounds, spec);
    if (!e.computations.empty()) {
      out.accepted.insert(w);
    } else if (e.resolved()) {
      out.rejected.insert(w);
    } else {
      out.undetermined.insert(w);
    }
  }
  return out;
}

// As the OM1 check, comparing recognized languages over the word domain.
// Convergence of the whole breed is not required: the languages are compared
// word by word, which is what the definition asks for.
inline PurebredVerdict purebred_check_om2(const Breed& breed, const EnumerationBounds& bounds,
                                          const std::vector<TapeWord>* words = nullptr,
                                          bool blank_background = false) {
  PurebredVerdict v;
  const LanguageReport whole = recognized_language_bounded(breed, bounds, words, blank_background);
  bool inconclusive = false;
  for (std::uint64_t mask : detail::proper_subsets(breed.size())) {
    const Breed sub = breed.subset(mask);
    const LanguageReport l = recognized_language_bounded(sub, bounds, words, blank_background);
    if (l.accepted == whole.accepted && whole.complete() && l.complete())
      return detail::witness(breed, mask, sub.name() + " recognizes the same words");
    // A word decided differently on both sides separates the languages for sure.
    const bool separated =
        std::any_of(whole.accepted.begin(), whole.accepted.end(), [&](const TapeWord& w) { return l.rejected.contains(w); }) ||
        std::any_of(whole.rejected.begin(), whole.rejected.end(), [&](const TapeWord& w) { return l.accepted.contains(w); });
    if (!separated) inconclusive = true;
  }
  if (inconclusive) {
    v.detail = "some words stayed undetermined within the bounds";
    return v;
  }
  v.kind = PurebredVerdict::Kind::purebred;
  v.detail = "no proper subset recognizes the same words";
  return v;
}

// One (iq, eq) data point: a breed's maxima or a single computation.
struct ScorePoint {
  std::string label;
  std::uint64_t iq = 0;
  std::uint64_t eq = 0;
  bool exact = true;
};

// Empirical intelligence functions over a fixed set of points.
//
// eq_by_iq / iq_by_eq are the literal definitions: maxima over the points
// whose iq (resp. eq) equals the argument. EQ() and IQ() are the monotone
// envelopes (maxima over iq >= x, resp. eq >= y); the equivalence
// EQ(x) >= y <=> IQ(y) >= x holds for these for all x, y >= 1.
struct IntelligenceTables {
  std::vector<ScorePoint> points;
  std::map<std::uint64_t, std::uint64_t> eq_by_iq;
  std::map<std::uint64_t, std::uint64_t> iq_by_eq;
  bool lower_bounds = false;

  std::uint64_t EQ(std::uint64_t x) const {
    std::uint64_t best = 0;
    for (const auto& p : points)
      if (p.iq >= x) best = std::max(best, p.eq);
    return best;
  }
  std::uint64_t IQ(std::uint64_t y) const {
    std::uint64_t best = 0;
    for (const auto& p : points)
      if (p.eq >= y) best = std::max(best, p.iq);
    return best;
  }
};

inline IntelligenceTables tabulate(std::vector<ScorePoint> points) {
  IntelligenceTables t;
  for (const auto& p : points) {
    auto& e = t.eq_by_iq[p.iq];
    e = std::max(e, p.eq);
    auto& i = t.iq_by_eq[p.eq];
    i = std::max(i, p.iq);
    if (!p.exact) t.lower_bounds = true;
  }
  t.points = std::move(points);
  return t;
}

// Checks EQ(x) >= y <=> IQ(y) >= x on every x, y in [1, max+1] of the table.
inline bool tables_consistent(const IntelligenceTables& t) {
  std::uint64_t max_iq = 0, max_eq = 0;
  for (const auto& p : t.points) {
    max_iq = std::max(max_iq, p.iq);
    max_eq = std::max(max_eq, p.eq);
  }
  // Only values where either side can change matter; probe those and their successors.
  std::set<std::uint64_t> xs{1, max_iq + 1}, ys{1, max_eq + 1};
  for (const auto& p : t.points) {
    if (p.iq >= 1) xs.insert({p.iq, p.iq + 1});
    if (p.eq >= 1) ys.insert({p.eq, p.eq + 1});
  }
  for (std::uint64_t x : xs)
    for (std::uint64_t y : ys)
      if ((t.EQ(x) >= y) != (t.IQ(y) >= x)) return false;
  return true;
}

struct BreedScore {
  IqEqReport report;
  PurebredVerdict purebred;
};

// Scores each breed and tabulates the breeds that are purebred (and halt)
// within the bounds. With require_purebred off, every halting breed counts.
inline IntelligenceTables empirical_intelligence_tables(std::span<const Breed> breeds, const EnumerationBounds& bounds,
                                                        std::uint64_t samples = 0, std::uint64_t seed = 1,
                                                        bool require_purebred = true,
                                                        std::vector<BreedScore>* scores = nullptr) {
  std::vector<ScorePoint> points;
  for (const Breed& b : breeds) {
    BreedScore s;
    s.report = breed_iq_eq(b, bounds, {}, samples, seed);
    if (b.size() == 1) {
      s.purebred.kind = s.report.exact ? PurebredVerdict::Kind::purebred : PurebredVerdict::Kind::unknown;
      s.purebred.detail = "single member";
    } else if (require_purebred) {
      s.purebred = purebred_check_om1(b, bounds);
    }
    const bool eligible = !require_purebred || s.purebred.kind == PurebredVerdict::Kind::purebred;
    if (s.report.found && eligible)
      points.push_back(ScorePoint{b.name(), s.report.iq_lower, s.report.eq_lower, s.report.exact});
    if (scores) scores->push_back(std::move(s));
  }
  return tabulate(std::move(points));
}

}  // namespace orchmach
