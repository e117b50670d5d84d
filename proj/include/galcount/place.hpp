#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "galcount/arith.hpp"
#include "galcount/error.hpp"

namespace galcount {

/// A place of Q: a rational prime or the real place. Orders the real place first.
class Place {
 public:
  static constexpr Place infinity() { return Place(0); }

  static Place prime(i64 p) {
    if (!is_prime(p)) throw DomainError("not a prime place: " + std::to_string(p));
    return Place(p);
  }

  /// For callers that already know p is prime (sieve output).
  static constexpr Place prime_unchecked(i64 p) { return Place(p); }

  static Place parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "oo") return infinity();
    try {
      return prime(std::stoll(std::string(text)));
    } catch (const std::invalid_argument&) {
      throw DomainError("cannot parse place '" + std::string(text) + "'");
    }
  }

  constexpr bool is_infinite() const { return p_ == 0; }
  constexpr bool is_finite() const { return p_ != 0; }

  i64 prime() const {
    if (is_infinite()) throw DomainError("the real place has no residue characteristic");
    return p_;
  }

  constexpr i64 key() const { return p_; }
  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

  constexpr auto operator<=>(const Place&) const = default;

 private:
  constexpr explicit Place(i64 p) : p_(p) {}
  i64 p_;
};

}  // namespace galcount
