#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"
#include "orchmach/policy.hpp"

namespace orchmach {

struct EpisodeResult {
  std::string breed;
  std::uint64_t seed = 0;
  std::string policy = "random";  // or "follow:<member>"
  bool halted = false;
  std::uint64_t N = 0;  // iterations; for a capped run, the loop counter at the cap
  std::uint64_t selections = 0;
  std::uint64_t ones = 0;
  std::uint32_t o2 = 0;
  std::uint64_t o_mean_floor = 0;
  std::vector<std::uint64_t> selected_counts;

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

inline EpisodeResult episode_from_trace(const Breed& breed, std::uint64_t seed, std::string policy, const RunTrace& t) {
  EpisodeResult e;
  e.breed = breed.name();
  e.seed = seed;
  e.policy = std::move(policy);
  e.halted = t.halted();
  e.N = t.iterations;
  e.selections = t.selection_count;
  e.ones = t.ones;
  e.o2 = t.o2();
  e.o_mean_floor = t.o_mean_floor();
  e.selected_counts = t.selected_counts;
  return e;
}

inline RunOptions episode_options(std::uint64_t cap, std::uint64_t progress_every = 0,
                                  std::function<void(std::uint64_t)> on_progress = {}) {
  RunOptions opt;
  opt.cap = cap;
  opt.record_selections = false;
  opt.progress_every = progress_every;
  opt.on_progress = std::move(on_progress);
  return opt;
}

// One OM1 run with seeded random selection.
inline EpisodeResult run_episode(const Breed& breed, std::uint64_t seed, std::uint64_t cap) {
  SelectionPolicy p = SelectionPolicy::seeded_random(seed);
  return episode_from_trace(breed, seed, "random", om1_run(breed, p, episode_options(cap)));
}

// Sticks with `member` while it is alive, random afterwards.
inline EpisodeResult run_follow_episode(const Breed& breed, std::uint32_t member, std::uint64_t seed,
                                        std::uint64_t cap) {
  SelectionPolicy p = SelectionPolicy::follow(member, seed);
  return episode_from_trace(breed, seed, "follow:" + breed[member].name(), om1_run(breed, p, episode_options(cap)));
}

struct Triplet {
  std::uint32_t o2 = 0;
  std::uint64_t N = 0;
  std::uint64_t ones = 0;
  std::uint64_t seed = 0;
  std::string policy;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Best halted episodes under three keys; ties go to the smaller seed, so the
// result does not depend on the order episodes are folded in.
struct BestTriplets {
  std::optional<Triplet> by_o2;
  std::optional<Triplet> by_N;
  std::optional<Triplet> by_ones;

  bool empty() const noexcept { return !by_o2; }

  void absorb(const EpisodeResult& e) {
    if (!e.halted) return;
    const Triplet t{e.o2, e.N, e.ones, e.seed, e.policy};
    offer(by_o2, t, [](const Triplet& x) { return std::tuple(x.o2, x.N, x.ones); });
    offer(by_N, t, [](const Triplet& x) { return std::tuple(x.N, x.o2, x.ones); });
    offer(by_ones, t, [](const Triplet& x) { return std::tuple(x.ones, x.o2, x.N); });
  }

  void merge(const BestTriplets& other) {
    for (const auto* t : {&other.by_o2, &other.by_N, &other.by_ones}) {
      if (!*t) continue;
      offer(by_o2, **t, [](const Triplet& x) { return std::tuple(x.o2, x.N, x.ones); });
      offer(by_N, **t, [](const Triplet& x) { return std::tuple(x.N, x.o2, x.ones); });
      offer(by_ones, **t, [](const Triplet& x) { return std::tuple(x.ones, x.o2, x.N); });
    }
  }

  friend bool operator==(const BestTriplets&, const BestTriplets&) = default;

 private:
  template <class Key>
  static void offer(std::optional<Triplet>& slot, const Triplet& t, Key key) {
    if (!slot || key(t) > key(*slot) || (key(t) == key(*slot) && t.seed < slot->seed)) slot = t;
  }
};

inline constexpr std::uint64_t kLongRunThreshold = 1'000'000'000;
inline constexpr std::uint64_t kProgressEvery = 100'000'000;

struct ExperimentConfig {
  std::uint64_t episodes = 100;
  std::uint64_t cap = 1'000'000;
  std::uint64_t seed_base = 1;
  unsigned jobs = 0;  // 0: hardware concurrency
  bool long_run = false;
  // Prepend one follow-member episode per member, so that every member's
  // standalone run is among the candidates.
  bool baseline = false;

  void validate() const {
    if (episodes < 1) throw PreconditionError("an experiment needs at least one episode");
    if (cap >= kLongRunThreshold && !long_run)
      throw PreconditionError("caps of 10^9 steps or more need the long_run flag");
  }
};

struct ExperimentResult {
  BestTriplets best;
  std::vector<EpisodeResult> episodes;  // index order, baseline first
  std::uint64_t halted = 0;
};

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Episode k uses seed seed_base + k. Results are stored by index, so they do
// not depend on the number of threads.
inline ExperimentResult run_experiment(const Breed& breed, const ExperimentConfig& cfg,
                                       const std::function<void(const std::string&)>& log = {}) {
  cfg.validate();
  if (breed.empty()) throw PreconditionError("cannot run an empty breed");
  const std::uint64_t baseline = cfg.baseline ? breed.size() : 0;
  const std::uint64_t total = baseline + cfg.episodes;
  ExperimentResult out;
  out.episodes.resize(total);

  std::mutex log_mutex;
  auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    log(msg);
  };

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= total) return;
      const std::uint64_t seed = cfg.seed_base + k;
      std::function<void(std::uint64_t)> progress;
      if (cfg.long_run)
        progress = [&, k](std::uint64_t steps) {
          say("episode " + std::to_string(k) + ": " + std::to_string(steps) + " selections");
        };
      const RunOptions opt = episode_options(cfg.cap, cfg.long_run ? kProgressEvery : 0, std::move(progress));
      if (k < baseline) {
        const auto member = static_cast<std::uint32_t>(k);
        SelectionPolicy p = SelectionPolicy::follow(member, seed);
        out.episodes[k] = episode_from_trace(breed, seed, "follow:" + breed[member].name(), om1_run(breed, p, opt));
      } else {
        SelectionPolicy p = SelectionPolicy::seeded_random(seed);
        out.episodes[k] = episode_from_trace(breed, seed, "random", om1_run(breed, p, opt));
      }
    }
  };

  const unsigned jobs = std::min<std::uint64_t>(resolve_jobs(cfg.jobs), total);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  for (const EpisodeResult& e : out.episodes) {
    out.best.absorb(e);
    out.halted += e.halted;
  }
  return out;
}

// One row of the breed comparison table.
struct TableRow {
  std::string breed;
  std::size_t members = 0;
  std::uint64_t best_ones = 0;   // best standalone member by ones
  std::uint64_t best_steps = 0;  // its step count
  std::string best_member;
  BestTriplets best;
};

// Standalone stats of each member (halting members only, within cap).
inline TableRow make_table_row(const Breed& breed, const BestTriplets& best, std::uint64_t standalone_cap) {
  TableRow row;
  row.breed = breed.name();
  row.members = breed.size();
  row.best = best;
  for (const TuringMachine& m : breed.members()) {
    const RunResult r = tm_run(m, standalone_cap);
    if (!r.halted()) continue;
    if (row.best_member.empty() || r.ones > row.best_ones || (r.ones == row.best_ones && r.steps > row.best_steps)) {
      row.best_ones = r.ones;
      row.best_steps = r.steps;
      row.best_member = m.name();
    }
  }
  return row;
}

namespace detail {

inline std::string triplet_text(const std::optional<Triplet>& t) {
  if (!t) return "-";
  return "(" + std::to_string(t->o2) + "," + std::to_string(t->N) + "," + std::to_string(t->ones) + ")";
}

inline std::string triplet_csv(const std::optional<Triplet>& t) {
  if (!t) return ",,";
  return std::to_string(t->o2) + "," + std::to_string(t->N) + "," + std::to_string(t->ones);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string table_csv(std::span<const TableRow> rows) {
  std::string out =
      "breed,members,ones,c_t,o2_best_o2,N_best_o2,ones_best_o2,o2_best_N,N_best_N,ones_best_N,"
      "o2_best_ones,N_best_ones,ones_best_ones\n";
  for (const TableRow& r : rows) {
    out += detail::csv_field(r.breed) + "," + std::to_string(r.members) + "," + std::to_string(r.best_ones) + "," +
           std::to_string(r.best_steps) + "," + detail::triplet_csv(r.best.by_o2) + "," +
           detail::triplet_csv(r.best.by_N) + "," + detail::triplet_csv(r.best.by_ones) + "\n";
  }
  return out;
}

inline std::string table_text(std::span<const TableRow> rows) {
  std::vector<std::vector<std::string>> cells{
      {"breed", "members", "1s", "c_t", "max o2", "max N", "max 1s"}};
  for (const TableRow& r : rows) {
    char ct[32];
    std::snprintf(ct, sizeof ct, "%.3g", static_cast<double>(r.best_steps));
    cells.push_back({r.breed, std::to_string(r.members), std::to_string(r.best_ones), ct,
                     detail::triplet_text(r.best.by_o2), detail::triplet_text(r.best.by_N),
                     detail::triplet_text(r.best.by_ones)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

// Largest halted N per observed o2, over any mix of breeds.
inline std::map<std::uint32_t, std::uint64_t> iqplot_rows(std::span<const EpisodeResult> results) {
  std::map<std::uint32_t, std::uint64_t> rows;
  for (const EpisodeResult& e : results) {
    if (!e.halted) continue;
    auto& v = rows[e.o2];
    v = std::max(v, e.N);
  }
  return rows;
}

inline std::string iqplot_csv(const std::map<std::uint32_t, std::uint64_t>& rows) {
  if (rows.empty()) return {};
  std::string out = "o2,maxN\n";
  for (const auto& [o2, n] : rows) out += std::to_string(o2) + "," + std::to_string(n) + "\n";
  return out;
}

}  // namespace orchmach
