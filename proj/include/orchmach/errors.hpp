#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orchmach {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rule-index code that does not have the 1 + 2R layout.
class MalformedCode : public Error {
 public:
  using Error::Error;
};

// Rule-index code (or rule list) with two rules for one left side.
class NondeterministicCode : public Error {
 public:
  using Error::Error;
};

// Machine that cannot be written in rule-index notation (uses blank).
class UnencodableMachine : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A scripted selection named a member that offers no applicable rule.
class PolicyError : public Error {
 public:
  PolicyError(std::uint64_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

class ReplayMismatch : public Error {
 public:
  ReplayMismatch(std::uint64_t step, const std::string& what)
      : Error("replay diverged at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace orchmach
