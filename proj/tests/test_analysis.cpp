#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using namespace orchmach;

TEST_CASE("{C,D} scores iq 3, eq 2", "[analysis]") {
  const IqEqReport r = breed_iq_eq(catalog::CD(), {});
  CHECK(r.found);
  CHECK(r.exact);
  CHECK(r.iq_lower == 3);
  CHECK(r.eq_lower == 2);
  CHECK(r.verdict == Verdict::certified_convergent);
}

TEST_CASE("single members score through one run", "[analysis]") {
  const IqEqReport j = breed_iq_eq(catalog::trivial(catalog::J()), {});
  CHECK(j.exact);
  CHECK(j.iq_lower == 1);
  CHECK(j.eq_lower == 0);
  const IqEqReport c = breed_iq_eq(catalog::trivial(catalog::C()), {});
  CHECK(c.iq_lower == 3);
  CHECK(c.eq_lower == 1);
  const IqEqReport a = breed_iq_eq(catalog::trivial(catalog::A()), {});
  CHECK_FALSE(a.found);
  CHECK_FALSE(a.exact);
}

TEST_CASE("purebred checks on shared tapes", "[analysis]") {
  const PurebredVerdict cd = purebred_check_om1(catalog::CD(), {});
  CHECK(cd.kind == PurebredVerdict::Kind::purebred);

  const PurebredVerdict cdg = purebred_check_om1(catalog::CDG(), {});
  CHECK(cdg.kind == PurebredVerdict::Kind::not_purebred);
  REQUIRE(cdg.witness_mask);
  CHECK(*cdg.witness_mask == 0b011);
  CHECK(cdg.witness_members == std::vector<std::string>{"C", "D"});

  EnumerationBounds b;
  b.depth_cap = 16;
  CHECK(purebred_check_om1(catalog::AB(), b).kind == PurebredVerdict::Kind::unknown);
}

TEST_CASE("X recognizes (01)^n", "[analysis]") {
  const LanguageReport x = recognized_language_bounded(catalog::trivial(catalog::X()), {});
  CHECK(x.complete());
  CHECK(x.accepted == std::set<TapeWord>{"01", "0101"});
  CHECK(x.rejected.count("0110") == 1);
  CHECK(x.rejected.count("") == 1);

  const LanguageReport y = recognized_language_bounded(catalog::trivial(catalog::Y()), {});
  CHECK(y.accepted == std::set<TapeWord>{"10", "1010"});

  const std::vector<TapeWord> empty{""};
  const LanguageReport xb = recognized_language_bounded(catalog::trivial(catalog::X()), {}, &empty, true);
  CHECK(xb.accepted == std::set<TapeWord>{""});
}

TEST_CASE("{X,Y} accepts 0110 and is purebred on it", "[analysis]") {
  const std::vector<TapeWord> w{"0110"};
  const LanguageReport l = recognized_language_bounded(catalog::XY(), {}, &w);
  CHECK(l.accepted == std::set<TapeWord>{"0110"});
  CHECK(purebred_check_om2(catalog::XY(), {}, &w).kind == PurebredVerdict::Kind::purebred);
  CHECK(purebred_check_om2(catalog::XY(), {}).kind == PurebredVerdict::Kind::purebred);
}

TEST_CASE("{X,X',Y} is not purebred on even-length words", "[analysis]") {
  std::vector<TapeWord> even;
  for (const auto& w : all_words(4))
    if (!w.empty() && w.size() % 2 == 0) even.push_back(w);
  const PurebredVerdict v = purebred_check_om2(catalog::XXpY(), {}, &even);
  CHECK(v.kind == PurebredVerdict::Kind::not_purebred);
  CHECK(v.witness_members == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("w-iq on small words", "[analysis]") {
  const IqEqReport x = w_iq_eq(catalog::trivial(catalog::X()), parse_word("0101"), {});
  CHECK(x.iq_lower == 5);
  CHECK(x.eq_lower == 1);
  const IqEqReport xp = w_iq_eq(catalog::trivial(catalog::Xp()), parse_word("0101"), {});
  CHECK(xp.iq_lower == 1);
  const IqEqReport xy = w_iq_eq(catalog::XY(), parse_word("0110"), {});
  CHECK_FALSE(xy.exact);  // choosing Y first loops forever in state 9
  CHECK(xy.iq_lower == 5);
  CHECK(xy.eq_lower == 2);
}

TEST_CASE("all_words lists by length then lexicographically", "[analysis]") {
  CHECK(all_words(2) == std::vector<TapeWord>{"", "0", "1", "00", "01", "10", "11"});
  CHECK(all_words(4).size() == 31);
}

TEST_CASE("iq and eq agree with brute-force maxima", "[analysis][oracle]") {
  std::mt19937_64 rng(59);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const Breed b = oracle::random_breed(rng, 2 + static_cast<unsigned>(rng() % 2), 2, 0.75);
    EnumerationBounds bounds;
    bounds.depth_cap = 12;
    const IqEqReport r = breed_iq_eq(b, bounds);
    if (!r.exact) continue;
    std::uint64_t iq = 0, eq = 0;
    for (const auto& p : oracle::brute_force_paths(b, 12)) {
      REQUIRE(p.trace.halted());
      iq = std::max(iq, p.trace.iterations);
      eq = std::max(eq, p.trace.o_mean_floor());
    }
    CHECK(r.iq_lower == iq);
    CHECK(r.eq_lower == eq);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("intelligence tables over the small catalog", "[analysis]") {
  const std::vector<Breed> breeds{catalog::CD(), catalog::trivial(catalog::E()), catalog::trivial(catalog::C()),
                                  catalog::CDG()};
  std::vector<BreedScore> scores;
  const IntelligenceTables t = empirical_intelligence_tables(breeds, {}, 0, 1, true, &scores);
  REQUIRE(scores.size() == 4);
  CHECK(scores[3].purebred.kind == PurebredVerdict::Kind::not_purebred);
  CHECK(t.points.size() == 3);
  CHECK(t.IQ(2) == 3);
  CHECK(t.EQ(3) == 2);
  CHECK(t.eq_by_iq.at(3) == 2);
  CHECK(t.eq_by_iq.at(2) == 0);
  CHECK_FALSE(t.lower_bounds);
  CHECK(tables_consistent(t));
}

TEST_CASE("the envelope tables satisfy the EQ/IQ equivalence", "[analysis][property]") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 500; ++i) {
    std::vector<ScorePoint> pts;
    for (std::uint64_t k = 1 + rng() % 8; k > 0; --k) pts.push_back(ScorePoint{"p", 1 + rng() % 20, rng() % 10, true});
    const IntelligenceTables t = tabulate(pts);
    CHECK(tables_consistent(t));
    for (std::uint64_t x = 1; x <= 22; ++x)
      for (std::uint64_t y = 1; y <= 11; ++y) CHECK((t.EQ(x) >= y) == (t.IQ(y) >= x));
  }
}

TEST_CASE("a member's word can be lost in the breed", "[analysis]") {
  // Z copies X's moves on 01, then keeps walking right over blanks.
  const TuringMachine z = catalog::from_text("Z", "0,0 -> 1,0,R\n1,1 -> 0,1,R\n0,_ -> 0,_,R");
  const std::vector<TapeWord> w{"01"};
  CHECK(recognized_language_bounded(catalog::trivial(catalog::X()), {}, &w).accepted.count("01") == 1);
  const Breed xz("{X,Z}", {catalog::X(), z});
  CHECK(recognized_language_bounded(xz, {}, &w).accepted.empty());
  // One computation only, and it runs away on blanks.
  EngineSpec spec;
  spec.word = parse_word("01");
  const Enumeration e = enumerate_computations(xz, {}, spec);
  CHECK(e.computations.empty());
  CHECK(e.verdict == Verdict::divergent);
  REQUIRE_FALSE(e.witnesses.empty());
  CHECK(e.witnesses[0].kind == DivergenceWitness::Kind::runaway);
  CHECK(e.witnesses[0].member == 1);
}
