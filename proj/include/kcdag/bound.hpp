#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "kcdag/error.hpp"

namespace kcdag {

/// Decomposition bound i in [0, inf]. A conjunct with more than i variables
/// is "large"; a bounded decomposition has at most one large conjunct.
class Bound {
 public:
  constexpr explicit Bound(std::uint32_t value) : value_(value), infinite_(false) {}

  static constexpr Bound infinite() { return Bound(); }

  /// Accepts a non-negative integer or the token `inf`.
  static Bound parse(std::string_view text);

  constexpr bool is_infinite() const noexcept { return infinite_; }
  std::uint32_t value() const {
    if (infinite_) throw PreconditionError("infinite bound has no integer value");
    return value_;
  }

  /// True iff a conjunct over `num_vars` variables exceeds the bound.
  constexpr bool exceeded_by(std::size_t num_vars) const noexcept {
    return !infinite_ && num_vars > value_;
  }

  /// Dense code for memo keys; distinct for every bound.
  constexpr std::uint64_t key() const noexcept {
    return infinite_ ? (std::uint64_t{1} << 32) : value_;
  }

  std::string to_string() const {
    return infinite_ ? std::string("inf") : std::to_string(value_);
  }

  friend constexpr bool operator==(Bound a, Bound b) noexcept {
    return a.key() == b.key();
  }
  friend constexpr std::strong_ordering operator<=>(Bound a, Bound b) noexcept {
    return a.key() <=> b.key();
  }

 private:
  constexpr Bound() : value_(0), infinite_(true) {}

  std::uint32_t value_;
  bool infinite_;
};

inline Bound Bound::parse(std::string_view text) {
  if (text == "inf") return infinite();
  if (text.empty()) throw ParseError("empty bound");
  std::uint64_t value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw ParseError("bound must be an integer or 'inf'");
    value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    if (value > UINT32_MAX) throw ParseError("bound out of range");
  }
  return Bound(static_cast<std::uint32_t>(value));
}

}  // namespace kcdag
