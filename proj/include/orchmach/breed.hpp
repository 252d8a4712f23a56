#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orchmach/errors.hpp"
#include "orchmach/machine.hpp"

namespace orchmach {

// An ordered set of machines run together. Selection indices refer to the
// member order, which never changes.
class Breed {
 public:
  Breed() = default;

  Breed(std::string name, std::vector<TuringMachine> members) : name_(std::move(name)), members_(std::move(members)) {
    std::set<std::string> seen;
    for (const auto& m : members_) {
      if (!seen.insert(lower(m.name())).second)
        throw PreconditionError("breed '" + name_ + "' has two members named '" + m.name() + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<TuringMachine>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const TuringMachine& operator[](std::size_t i) const { return members_.at(i); }

  // Case-insensitive lookup by member name.
  std::optional<std::uint32_t> find(std::string_view member) const {
    const std::string key = lower(member);
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (lower(members_[i].name()) == key) return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  // Members whose bit is set in `mask`, in member order.
  Breed subset(std::uint64_t mask) const {
    std::vector<TuringMachine> picked;
    std::string label = "{";
    for (std::size_t i = 0; i < members_.size() && i < 64; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        if (!picked.empty()) label += ",";
        label += members_[i].name();
        picked.push_back(members_[i]);
      }
    }
    return Breed(label + "}", std::move(picked));
  }

  std::vector<std::string> member_names() const {
    std::vector<std::string> out;
    for (const auto& m : members_) out.push_back(m.name());
    return out;
  }

 private:
  static std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
  }

  std::string name_;
  std::vector<TuringMachine> members_;
};

}  // namespace orchmach
