#include <catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "orchmach/io.hpp"

using namespace orchmach;

namespace {

std::string data(const std::string& f) { return std::string(ORCHMACH_DATA_DIR) + "/" + f; }

}  // namespace

TEST_CASE("fixture breeds load", "[io]") {
  const Breed cd = io::load_breed(data("cd.json"));
  REQUIRE(cd.size() == 2);
  CHECK(cd[0].same_rules(catalog::C()));
  CHECK(cd[1].same_rules(catalog::D()));
  CHECK(io::load_breed(data("cdg.json"))[2].same_rules(catalog::G()));
  CHECK(io::load_breed(data("ej.json"))[1].same_rules(catalog::J()));
  const Breed xxpy = io::load_breed(data("xxpy.json"));
  REQUIRE(xxpy.size() == 3);
  CHECK(xxpy[1].same_rules(catalog::Xp()));
  CHECK(io::load_breed(data("champion.json"))[0].same_rules(catalog::champion()));
  CHECK(io::load_breed(data("variant.json"))[0].same_rules(catalog::variant()));
}

TEST_CASE("breed json round trips", "[io][property]") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 100; ++i) {
    const Breed b = oracle::random_breed(rng, 1 + static_cast<unsigned>(rng() % 4), 3, 0.7, i % 2 == 1);
    const Breed back = io::breed_from_json(io::parse_json(io::breed_to_json(b).dump(), "test"));
    REQUIRE(back.size() == b.size());
    CHECK(back.name() == b.name());
    for (std::size_t k = 0; k < b.size(); ++k) {
      CHECK(back[k].name() == b[k].name());
      CHECK(back[k].same_rules(b[k]));
    }
  }
}

TEST_CASE("malformed json is a parse error", "[io]") {
  CHECK_THROWS_AS(io::parse_json("{", "x"), ParseError);
  CHECK_THROWS_AS(io::breed_from_json(io::parse_json(R"({"name":"b"})", "x")), ParseError);
  CHECK_THROWS_AS(io::breed_from_json(io::parse_json(R"({"name":"b","machines":[{"name":"m","code":[1,0]}]})", "x")),
                  MalformedCode);
  CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), Error);
}

TEST_CASE("selection csv round trips", "[io]") {
  const Breed xy = catalog::XY();
  SelectionPolicy s = SelectionPolicy::scripted({0, 0, 1, 1});
  const RunTrace t = om2_run(xy, parse_word("0110"), s);
  const auto log = selection_log(xy, t);
  const std::string csv = io::selection_csv(log);
  CHECK(csv.rfind("step,member,from_index,to_index,rule\n", 0) == 0);
  CHECK(io::parse_selection_csv(csv) == log);

  const Breed cd = catalog::CD();
  SelectionPolicy r = SelectionPolicy::seeded_random(3);
  const auto cd_log = selection_log(cd, om1_run(cd, r));
  const std::string cd_csv = io::selection_csv(cd_log);
  CHECK((cd_csv.find("0,C,0,8,") != std::string::npos || cd_csv.find("0,D,0,11,") != std::string::npos));
  CHECK(io::parse_selection_csv(cd_csv) == cd_log);
  CHECK_THROWS_AS(io::parse_selection_csv("step,member\n0,C,0,6\n"), ParseError);
}

TEST_CASE("trace record fields", "[io]") {
  const Breed cd = catalog::CD();
  SelectionPolicy p = SelectionPolicy::seeded_random(5);
  const RunTrace t = om1_run(cd, p);
  const auto j = io::trace_record(cd, p, t);
  CHECK((j.at("N") == 3));
  CHECK((j.at("halted") == true));
  CHECK((j.at("o2") == 2));
  CHECK((j.at("policy").at("seed") == 5));
  CHECK(j.at("per_member_selected_counts").size() == 2);

  SelectionPolicy a = SelectionPolicy::follow(0, 1);
  RunOptions o;
  o.cap = 10;
  const auto capped = io::trace_record(catalog::AB(), a, om1_run(catalog::AB(), a, o));
  CHECK(capped.at("N").is_null());
  CHECK((capped.at("termination") == "cap_reached"));
}

TEST_CASE("episode jsonl round trips", "[io]") {
  const ExperimentResult r = run_experiment(catalog::AB(), [] {
    ExperimentConfig c;
    c.episodes = 20;
    c.cap = 500;
    c.jobs = 1;
    c.baseline = true;
    return c;
  }());
  const auto back = io::parse_episodes_jsonl(io::episodes_jsonl(r.episodes));
  CHECK(back == r.episodes);
  BestTriplets best;
  for (const auto& e : back) best.absorb(e);
  CHECK(best == r.best);
  CHECK((io::best_to_json(best).at("empty") == false));
}

TEST_CASE("experiment files resolve paths next to themselves", "[io]") {
  const io::ExperimentFile f = io::load_experiment(data("exp_cd.json"));
  CHECK(f.breed.size() == 2);
  CHECK(f.config.episodes == 100);
  CHECK(f.config.cap == 1000);
  CHECK(f.config.baseline);
}
