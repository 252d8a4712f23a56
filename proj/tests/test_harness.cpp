#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using namespace orchmach;

namespace {

ExperimentConfig small(std::uint64_t episodes, unsigned jobs, bool baseline = false) {
  ExperimentConfig c;
  c.episodes = episodes;
  c.cap = 1000;
  c.jobs = jobs;
  c.baseline = baseline;
  return c;
}

}  // namespace

TEST_CASE("{C,D} best triplet", "[harness]") {
  const ExperimentResult r = run_experiment(catalog::CD(), small(100, 2));
  CHECK(r.halted == 100);
  REQUIRE(r.best.by_o2);
  CHECK(r.best.by_o2->o2 == 2);
  CHECK(r.best.by_o2->N == 3);
  CHECK(r.best.by_o2->ones <= 2);
  REQUIRE(r.best.by_ones);
  CHECK(r.best.by_ones->ones == 2);
  for (std::size_t k = 0; k < r.episodes.size(); ++k) CHECK(r.episodes[k].seed == 1 + k);
}

TEST_CASE("experiments do not depend on the thread count", "[harness][property]") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 10; ++i) {
    const Breed b = oracle::random_breed(rng, 3, 3, 0.8);
    const ExperimentResult one = run_experiment(b, small(40, 1, true));
    const ExperimentResult many = run_experiment(b, small(40, 4, true));
    const ExperimentResult again = run_experiment(b, small(40, 4, true));
    CHECK(one.episodes == many.episodes);
    CHECK(one.best == many.best);
    CHECK(many.episodes == again.episodes);
  }
}

TEST_CASE("merging per-chunk bests equals folding everything", "[harness][property]") {
  const ExperimentResult r = run_experiment(catalog::AB(), small(60, 3));
  BestTriplets whole, left, right;
  for (const auto& e : r.episodes) whole.absorb(e);
  for (std::size_t k = 0; k < r.episodes.size(); ++k) (k % 2 ? left : right).absorb(r.episodes[k]);
  left.merge(right);
  CHECK(left == whole);
  CHECK(whole == r.best);
}

TEST_CASE("baseline episodes come first and bound the best", "[harness]") {
  const Breed b("{E,C,A}", {catalog::E(), catalog::C(), catalog::A()});
  const ExperimentResult r = run_experiment(b, small(20, 2, true));
  REQUIRE(r.episodes.size() == 23);
  CHECK(r.episodes[0].policy == "follow:E");
  CHECK(r.episodes[1].policy == "follow:C");
  CHECK(r.episodes[2].policy == "follow:A");
  CHECK_FALSE(r.episodes[2].halted);
  REQUIRE(r.best.by_N);
  for (std::size_t k = 0; k < 3; ++k)
    if (r.episodes[k].halted) CHECK(r.best.by_N->N >= r.episodes[k].N);
}

TEST_CASE("{A,B} random episodes", "[harness]") {
  const EpisodeResult e = run_episode(catalog::AB(), 1, 1'000'000);
  CHECK(e.halted);
  CHECK(e.N == e.selections + 1);
  CHECK(run_episode(catalog::AB(), 1, 1'000'000) == e);
  const EpisodeResult f = run_follow_episode(catalog::AB(), 0, 1, 5000);
  CHECK_FALSE(f.halted);
  CHECK(f.selections == 5000);
}

TEST_CASE("experiment config validation", "[harness]") {
  ExperimentConfig c;
  c.cap = kLongRunThreshold;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c.long_run = true;
  CHECK_NOTHROW(c.validate());
  c.episodes = 0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("long runs report progress", "[harness]") {
  std::vector<std::uint64_t> seen;
  RunOptions opt = episode_options(2500, 1000, [&](std::uint64_t s) { seen.push_back(s); });
  SelectionPolicy p = SelectionPolicy::follow(0, 1);
  om1_run(catalog::AB(), p, opt);
  CHECK(seen == std::vector<std::uint64_t>{1000, 2000});
}

TEST_CASE("iq plot keeps the largest N per o2", "[harness]") {
  std::vector<EpisodeResult> es(4);
  es[0].halted = true, es[0].o2 = 2, es[0].N = 5;
  es[1].halted = true, es[1].o2 = 2, es[1].N = 9;
  es[2].halted = true, es[2].o2 = 1, es[2].N = 3;
  es[3].halted = false, es[3].o2 = 3, es[3].N = 100;
  const auto rows = iqplot_rows(es);
  CHECK(rows == std::map<std::uint32_t, std::uint64_t>{{1, 3}, {2, 9}});
  CHECK(iqplot_csv(rows) == "o2,maxN\n1,3\n2,9\n");
  CHECK(iqplot_csv({}).empty());
}

TEST_CASE("table row picks the best standalone member", "[harness]") {
  const ExperimentResult r = run_experiment(catalog::CD(), small(10, 1));
  const TableRow row = make_table_row(catalog::CD(), r.best, 1000);
  CHECK(row.members == 2);
  CHECK(row.best_member == "D");
  CHECK(row.best_ones == 2);
  CHECK(row.best_steps == 2);
  const std::vector<TableRow> rows{row};
  const std::string csv = table_csv(rows);
  CHECK(csv.rfind("breed,", 0) == 0);
  CHECK(csv.find("\"{C,D}\"") != std::string::npos);
  CHECK(table_text(rows).find("{C,D}") != std::string::npos);
}
