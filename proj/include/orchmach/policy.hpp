#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/symbols.hpp"

namespace orchmach {

// One entry of the applicable-rule list: member index plus the right side its
// rule offers for the current control pair.
struct Candidate {
  std::uint32_t member = 0;
  Action action;
};

// Uniform draw in [0, n) from a 64-bit Mersenne Twister. Written out instead
// of std::uniform_int_distribution so seeds reproduce across standard
// libraries.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Source of the nondeterministic choices made by the engines.
class SelectionPolicy {
 public:
  enum class Kind : std::uint8_t { seeded_random, scripted, choice_path, follow, replay };

  static SelectionPolicy seeded_random(std::uint64_t seed) {
    SelectionPolicy p(Kind::seeded_random);
    p.seed_ = seed;
    p.rng_.seed(seed);
    return p;
  }

  // Member indices, one per selection.
  static SelectionPolicy scripted(std::vector<std::uint32_t> members) {
    SelectionPolicy p(Kind::scripted);
    p.script_ = std::move(members);
    return p;
  }

  // Positions in the applicable-rule list, one per selection. When the path
  // runs out the run stops and the size of the list on offer is kept, which is
  // what an exhaustive enumerator needs to extend the path.
  static SelectionPolicy choice_path(std::vector<std::uint32_t> positions) {
    SelectionPolicy p(Kind::choice_path);
    p.script_ = std::move(positions);
    return p;
  }

  // Always takes `member`'s rule while it is on offer, then falls back to
  // seeded random choice.
  static SelectionPolicy follow(std::uint32_t member, std::uint64_t seed) {
    SelectionPolicy p(Kind::follow);
    p.seed_ = seed;
    p.rng_.seed(seed);
    p.followed_ = member;
    return p;
  }

  // Re-executes a logged run: member and right side must both match.
  static SelectionPolicy replay(std::vector<std::pair<std::uint32_t, Action>> log) {
    SelectionPolicy p(Kind::replay);
    p.log_ = std::move(log);
    for (const auto& e : p.log_) p.script_.push_back(e.first);
    return p;
  }

  Kind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<std::uint32_t>& script() const noexcept { return script_; }
  std::uint32_t followed() const noexcept { return followed_; }
  std::size_t last_offer_count() const noexcept { return last_offer_; }

  // Returns a position in `offer`, or nullopt when a script has run out.
  // `step` is the selection number, used in error messages.
  std::optional<std::size_t> choose(std::span<const Candidate> offer, std::uint64_t step) {
    last_offer_ = offer.size();
    switch (kind_) {
      case Kind::seeded_random:
        if (offer.size() == 1) return 0;
        return static_cast<std::size_t>(bounded_draw(rng_, offer.size()));
      case Kind::follow:
        for (std::size_t i = 0; i < offer.size(); ++i)
          if (offer[i].member == followed_) return i;
        if (offer.size() == 1) return 0;
        return static_cast<std::size_t>(bounded_draw(rng_, offer.size()));
      case Kind::scripted: {
        if (cursor_ >= script_.size()) return std::nullopt;
        const std::uint32_t want = script_[cursor_++];
        for (std::size_t i = 0; i < offer.size(); ++i)
          if (offer[i].member == want) return i;
        throw PolicyError(step, "scripted member #" + std::to_string(want) + " offers no applicable rule");
      }
      case Kind::choice_path: {
        if (cursor_ >= script_.size()) return std::nullopt;
        const std::uint32_t pos = script_[cursor_++];
        if (pos >= offer.size())
          throw PolicyError(step, "choice " + std::to_string(pos) + " out of " + std::to_string(offer.size()));
        return pos;
      }
      case Kind::replay: {
        if (cursor_ >= log_.size()) return std::nullopt;
        const auto& [want, action] = log_[cursor_++];
        for (std::size_t i = 0; i < offer.size(); ++i) {
          if (offer[i].member != want) continue;
          if (offer[i].action != action)
            throw ReplayMismatch(step, "member #" + std::to_string(want) + " offers " + to_string(offer[i].action) +
                                           ", log has " + to_string(action));
          return i;
        }
        throw ReplayMismatch(step, "member #" + std::to_string(want) + " offers no applicable rule");
      }
    }
    return std::nullopt;
  }

 private:
  explicit SelectionPolicy(Kind k) : kind_(k) {}

  Kind kind_;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
  std::vector<std::uint32_t> script_;
  std::vector<std::pair<std::uint32_t, Action>> log_;
  std::size_t cursor_ = 0;
  std::uint32_t followed_ = 0;
  std::size_t last_offer_ = 0;
};

}  // namespace orchmach
