#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orchmach/breed.hpp"
#include "orchmach/codec.hpp"
#include "orchmach/machine.hpp"
#include "orchmach/rule_text.hpp"

// Small named machines used throughout the examples and tests. The two long
// codes are the five-state Busy Beaver champion and a variant of it that
// differs in one rule.
namespace orchmach::catalog {

inline const RuleIndexCode kChampionCode{9, 0, 11, 1, 15, 2, 17, 3, 11, 4, 23, 5, 24, 6, 3, 7, 21, 9, 0};
inline const RuleIndexCode kVariantCode{9, 0, 11, 1, 15, 2, 17, 3, 1, 4, 23, 5, 24, 6, 3, 7, 21, 9, 0};

// State numbers standing in for the symbolic states of X, Y and X'.
inline constexpr State kInfinity = 9;
inline constexpr State kReturn = 2;

inline TuringMachine from_text(std::string name, std::string_view rules) {
  return machine_from_rule_lines(std::move(name), parse_rule_lines(rules));
}

inline TuringMachine champion() { return decode_rule_index(kChampionCode, "champion"); }
inline TuringMachine variant() { return decode_rule_index(kVariantCode, "variant"); }

// Two infinite loops.
inline TuringMachine A() { return from_text("A", "0,0 -> 0,1,R"); }
inline TuringMachine B() { return from_text("B", "0,0 -> 0,0,L"); }

// Three-step machines that differ only in what they write.
inline TuringMachine C() { return from_text("C", "0,0 -> 1,0,R\n1,0 -> 2,0,R"); }
inline TuringMachine D() { return from_text("D", "0,0 -> 1,1,R\n1,0 -> 2,1,R"); }

// Each halts after one step; together they toggle one cell.
inline TuringMachine E() { return from_text("E", "0,0 -> 0,1,S"); }
inline TuringMachine J() { return from_text("J", "0,1 -> 0,0,S"); }

// Only has a rule for state 3, so it halts at once from state 0.
inline TuringMachine G() { return from_text("G", "3,0 -> 3,1,R"); }

// X accepts (01)^n, Y accepts (10)^n; rejection is an endless stay loop in state 9.
inline TuringMachine X() {
  return from_text("X",
                   "0,0 -> 1,0,R\n"
                   "0,1 -> 9,1,S\n"
                   "1,1 -> 0,1,R\n"
                   "1,0 -> 9,1,S\n"
                   "1,_ -> 9,1,S\n"
                   "9,1 -> 9,1,S");
}
inline TuringMachine Y() {
  return from_text("Y",
                   "0,1 -> 1,1,R\n"
                   "0,0 -> 9,1,S\n"
                   "1,0 -> 0,0,R\n"
                   "1,1 -> 9,1,S\n"
                   "1,_ -> 9,1,S\n"
                   "9,1 -> 9,1,S");
}
// Walks left from a blank in state 2.
inline TuringMachine Xp() {
  return from_text("X'",
                   "0,_ -> 2,_,L\n"
                   "2,0 -> 2,0,L\n"
                   "2,1 -> 2,1,L");
}

inline Breed trivial(TuringMachine m) {
  std::string name = "{" + m.name() + "}";
  std::vector<TuringMachine> members;
  members.push_back(std::move(m));
  return Breed(std::move(name), std::move(members));
}

inline Breed AB() { return Breed("{A,B}", {A(), B()}); }
inline Breed CD() { return Breed("{C,D}", {C(), D()}); }
inline Breed CDG() { return Breed("{C,D,G}", {C(), D(), G()}); }
inline Breed EJ() { return Breed("{E,J}", {E(), J()}); }
inline Breed XY() { return Breed("{X,Y}", {X(), Y()}); }
inline Breed XXpY() { return Breed("{X,X',Y}", {X(), Xp(), Y()}); }

struct Entry {
  std::string name;
  Breed breed;
  std::string note;
};

inline std::vector<Entry> entries() {
  return {
      {"champion", trivial(champion()), "five-state champion, rule-index code"},
      {"variant", trivial(variant()), "champion with rule (1,1) -> (0,0,S)"},
      {"ab", AB(), "two infinite loops"},
      {"cd", CD(), "convergent, purebred"},
      {"cdg", CDG(), "G never contributes"},
      {"ej", EJ(), "two one-step machines"},
      {"xy", XY(), "word input, accepts 0110 together"},
      {"xxpy", XXpY(), "word input, X' adds nothing"},
  };
}

}  // namespace orchmach::catalog
