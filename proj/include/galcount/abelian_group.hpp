#pragma once

// Finite abelian groups given as products of cyclic factors Z/d_1 x ... x Z/d_k,
// their character pairing with values in Q/Z, subgroups and annihilators.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "galcount/arith.hpp"
#include "galcount/error.hpp"

namespace galcount {

/// An element a/d of (1/d)Z/Z, stored in lowest terms.
class UnitRootExponent {
 public:
  UnitRootExponent() = default;
  UnitRootExponent(i64 residue, i64 modulus) {
    if (modulus <= 0) throw DomainError("UnitRootExponent: modulus must be positive");
    const i64 r = mod(residue, modulus);
    const i64 g = std::gcd(r, modulus);
    num_ = r / g;
    den_ = modulus / g;
  }

  i64 numerator() const { return num_; }
  i64 denominator() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  /// The residue a with value a/n; requires den | n.
  i64 residue_mod(i64 n) const {
    if (n % den_ != 0) throw DomainError("UnitRootExponent: modulus not a multiple of the denominator");
    return num_ * (n / den_);
  }

  friend UnitRootExponent operator+(const UnitRootExponent& a, const UnitRootExponent& b) {
    const i64 l = lcm(a.den_, b.den_);
    return {a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l};
  }
  friend UnitRootExponent operator-(const UnitRootExponent& a) { return {-a.num_, a.den_}; }
  friend bool operator==(const UnitRootExponent&, const UnitRootExponent&) = default;

  std::string to_string() const { return num_ == 0 ? "0" : std::to_string(num_) + "/" + std::to_string(den_); }
  friend std::ostream& operator<<(std::ostream& os, const UnitRootExponent& u) { return os << u.to_string(); }

 private:
  i64 num_ = 0;
  i64 den_ = 1;
};

using GroupElement = std::vector<i64>;

class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<i64> moduli) : moduli_(std::move(moduli)) {
    for (i64 d : moduli_) {
      if (d <= 0) throw DomainError("FiniteAbelianGroup: cyclic factor orders must be positive");
    }
  }

  const std::vector<i64>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }

  i64 order() const {
    return std::accumulate(moduli_.begin(), moduli_.end(), i64{1}, std::multiplies<>());
  }
  i64 exponent() const {
    return std::accumulate(moduli_.begin(), moduli_.end(), i64{1}, [](i64 a, i64 b) { return lcm(a, b); });
  }

  GroupElement identity() const { return GroupElement(moduli_.size(), 0); }

  GroupElement reduce(GroupElement x) const {
    check_shape(x);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod(x[i], moduli_[i]);
    return x;
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    check_shape(a);
    check_shape(b);
    GroupElement c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod(a[i] + b[i], moduli_[i]);
    return c;
  }

  GroupElement scale(const GroupElement& a, i64 k) const {
    check_shape(a);
    GroupElement c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = mod(mulmod(a[i], k, moduli_[i]), moduli_[i]);
    return c;
  }

  bool is_identity(const GroupElement& a) const {
    return std::all_of(a.begin(), a.end(), [](i64 c) { return c == 0; });
  }

  i64 element_order(const GroupElement& a) const {
    check_shape(a);
    i64 o = 1;
    for (std::size_t i = 0; i < a.size(); ++i) o = lcm(o, additive_order(a[i], moduli_[i]));
    return o;
  }

  /// Mixed-radix index in [0, order()).
  i64 encode(const GroupElement& a) const {
    check_shape(a);
    i64 idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx = idx * moduli_[i] + mod(a[i], moduli_[i]);
    return idx;
  }

  GroupElement decode(i64 idx) const {
    GroupElement a(moduli_.size());
    for (std::size_t i = moduli_.size(); i-- > 0;) {
      a[i] = idx % moduli_[i];
      idx /= moduli_[i];
    }
    return a;
  }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    const i64 n = order();
    out.reserve(static_cast<std::size_t>(n));
    for (i64 i = 0; i < n; ++i) out.push_back(decode(i));
    return out;
  }

  void check_shape(const GroupElement& a) const {
    if (a.size() != moduli_.size()) throw DomainError("element shape does not match group");
  }

  friend bool operator==(const FiniteAbelianGroup&, const FiniteAbelianGroup&) = default;

 private:
  std::vector<i64> moduli_;
};

/// The standard duality pairing sum chi_i x_i / d_i, identifying the dual group with G itself.
inline UnitRootExponent character_pairing(const GroupElement& chi, const GroupElement& x, const FiniteAbelianGroup& g) {
  g.check_shape(chi);
  g.check_shape(x);
  const i64 e = g.exponent();
  i64 acc = 0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const i64 d = g.moduli()[i];
    acc = mod(acc + mulmod(mulmod(chi[i], x[i], d), e / d, e), e);
  }
  return {acc, e};
}

/// A subgroup, kept both as its generators and as the full (sorted, encoded) element set.
class Subgroup {
 public:
  Subgroup(FiniteAbelianGroup ambient, std::vector<GroupElement> generators)
      : ambient_(std::move(ambient)), generators_(std::move(generators)) {
    for (auto& gen : generators_) gen = ambient_.reduce(gen);
    std::vector<char> seen(static_cast<std::size_t>(ambient_.order()), 0);
    std::vector<i64> frontier{0};
    seen[0] = 1;
    while (!frontier.empty()) {
      const i64 idx = frontier.back();
      frontier.pop_back();
      members_.push_back(idx);
      const GroupElement x = ambient_.decode(idx);
      for (const auto& gen : generators_) {
        const i64 next = ambient_.encode(ambient_.add(x, gen));
        if (!seen[next]) {
          seen[next] = 1;
          frontier.push_back(next);
        }
      }
    }
    std::sort(members_.begin(), members_.end());
  }

  static Subgroup whole(const FiniteAbelianGroup& g) {
    std::vector<GroupElement> gens;
    for (std::size_t i = 0; i < g.rank(); ++i) {
      GroupElement e = g.identity();
      e[i] = 1;
      gens.push_back(e);
    }
    return {g, gens};
  }
  static Subgroup trivial(const FiniteAbelianGroup& g) { return {g, {}}; }

  const FiniteAbelianGroup& ambient() const { return ambient_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  i64 order() const { return static_cast<i64>(members_.size()); }

  bool contains(const GroupElement& x) const {
    return std::binary_search(members_.begin(), members_.end(), ambient_.encode(ambient_.reduce(x)));
  }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(members_.size());
    for (i64 idx : members_) out.push_back(ambient_.decode(idx));
    return out;
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.ambient_ == b.ambient_ && a.members_ == b.members_;
  }

 private:
  FiniteAbelianGroup ambient_;
  std::vector<GroupElement> generators_;
  std::vector<i64> members_;
};

/// True when the given set of elements is closed under addition and contains 0.
inline bool is_subgroup(const FiniteAbelianGroup& g, const std::vector<GroupElement>& elems) {
  std::vector<i64> idx;
  for (const auto& e : elems) idx.push_back(g.encode(g.reduce(e)));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty() || idx.front() != 0) return false;
  for (i64 a : idx) {
    for (i64 b : idx) {
      const i64 c = g.encode(g.add(g.decode(a), g.decode(b)));
      if (!std::binary_search(idx.begin(), idx.end(), c)) return false;
    }
  }
  return true;
}

/// All characters of G vanishing on H, as a subgroup of the dual (same shape as G).
inline Subgroup annihilator(const Subgroup& h) {
  const FiniteAbelianGroup& g = h.ambient();
  std::vector<GroupElement> members;
  for (i64 idx = 0; idx < g.order(); ++idx) {
    const GroupElement chi = g.decode(idx);
    const bool kills = std::all_of(h.generators().begin(), h.generators().end(),
                                   [&](const GroupElement& x) { return character_pairing(chi, x, g).is_zero(); });
    if (kills) members.push_back(chi);
  }
  return {g, members};
}

}  // namespace galcount
