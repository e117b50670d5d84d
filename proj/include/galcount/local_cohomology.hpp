#pragma once

// Explicit models of H^1(Q_v, Z/n) and H^1(Q_v, mu_n) at every place v of Q.
//
// Side T:  H^1(Q_p, Z/n) = Hom(Q_p^*, Z/n). A class f has coordinates
//   [frobenius, tame, wild] with
//     f(p)                      = frobenius
//     f(tame generator)         = tame * n / |tame factor|
//     f(wild generator)         = wild * n / |wild factor|
//   where the unit group is split as mu_{p-1} x (1 + pZ_p) for odd p
//   (wild generator 1 + p) and {+-1} x (1 + 4Z_2) for p = 2 (tame generator -1,
//   wild generator 5).
// Side T*: Q_p^*/(Q_p^*)^n with coordinates [valuation, tame unit index,
//   wild unit index] in the same factors, so that the local pairing is the
//   plain character pairing of the two coordinate vectors.
// At the real place both sides are Z/gcd(n,2) (value on complex conjugation,
// resp. the sign), padded with two trivial factors.

#include <array>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "galcount/abelian_group.hpp"
#include "galcount/arith.hpp"
#include "galcount/error.hpp"
#include "galcount/place.hpp"

namespace galcount {

enum class Side { T, Dual };

/// Cyclic factor sizes of the local groups at a place.
struct LocalShape {
  Place place = Place::infinity();
  int n = 2;
  i64 tame = 1;
  i64 wild = 1;
  int wild_exponent = 0;

  std::vector<i64> moduli() const {
    if (place.is_infinite()) return {std::gcd(n, 2), 1, 1};
    return {n, tame, wild};
  }
  i64 order() const { return place.is_infinite() ? std::gcd(n, 2) : n * tame * wild; }
};

inline LocalShape local_shape(Place v, int n) {
  if (n < 2) throw DomainError("local cohomology needs n >= 2");
  LocalShape s;
  s.place = v;
  s.n = n;
  if (v.is_infinite()) return s;
  const i64 p = v.prime();
  s.tame = std::gcd<i64>(n, p == 2 ? 2 : p - 1);
  s.wild_exponent = valuation(n, p);
  s.wild = ipow(p, s.wild_exponent);
  return s;
}

/// Tame and wild indices of p-adic units given by integers prime to p.
class UnitCoordinates {
 public:
  UnitCoordinates(i64 p, int n) : p_(p), shape_(local_shape(Place::prime_unchecked(p), n)) {
    if (p_ != 2 && shape_.tame > 1) tame_root_ = find_tame_root();
    wild_modulus_ = shape_.wild * (p_ == 2 ? 4 : p_);
  }

  const LocalShape& shape() const { return shape_; }

  i64 tame_index(i64 u) const {
    check_unit(u);
    if (shape_.tame == 1) return 0;
    if (p_ == 2) return mod(u, 4) == 3 ? 1 : 0;
    const i64 x = powmod(u, static_cast<u64>((p_ - 1) / shape_.tame), p_);
    i64 cur = 1;
    for (i64 j = 0; j < shape_.tame; ++j) {
      if (cur == x) return j;
      cur = mulmod(cur, tame_root_, p_);
    }
    throw DomainError("tame index not found");
  }

  i64 wild_index(i64 u) const {
    check_unit(u);
    if (shape_.wild == 1) return 0;
    const i64 m = wild_modulus_;
    i64 target;
    i64 base;
    if (p_ == 2) {
      target = mod(mod(u, 4) == 3 ? -u : u, m);
      base = 5;
    } else {
      target = powmod(u, static_cast<u64>(p_ - 1), m);
      base = 1 + p_;
    }
    i64 cur = 1;
    for (i64 e = 0; e < shape_.wild; ++e) {
      if (cur == target) {
        return p_ == 2 ? e : mulmod(e, invmod(mod(p_ - 1, shape_.wild), shape_.wild), shape_.wild);
      }
      cur = mulmod(cur, base, m);
    }
    throw DomainError("wild index not found");
  }

 private:
  void check_unit(i64 u) const {
    if (mod(u, p_) == 0) throw DomainError("not a unit at " + std::to_string(p_));
  }

  // A fixed generator of the tame-factor roots of unity mod p.
  i64 find_tame_root() const {
    const i64 d = shape_.tame;
    const u64 cofactor = static_cast<u64>((p_ - 1) / d);
    for (i64 x = 2; x < p_; ++x) {
      const i64 h = powmod(x, cofactor, p_);
      if (multiplicative_order(h, p_, d) == d) return h;
    }
    throw DomainError("no tame root found");
  }

  i64 p_;
  LocalShape shape_;
  i64 tame_root_ = 1;
  i64 wild_modulus_ = 1;
};

/// An element of H^1(Q_v, Z/n) (side T) or H^1(Q_v, mu_n) (side Dual) in explicit coordinates.
template <Side S>
class LocalCoords {
 public:
  LocalCoords(Place v, int n, GroupElement coords) : place_(v), n_(n), coords_(std::move(coords)) {
    const auto m = local_shape(v, n).moduli();
    if (coords_.size() != m.size()) throw DomainError("local class: expected three coordinates");
    for (std::size_t i = 0; i < m.size(); ++i) coords_[i] = mod(coords_[i], m[i]);
  }

  static LocalCoords zero(Place v, int n) { return {v, n, {0, 0, 0}}; }

  Place place() const { return place_; }
  int n() const { return n_; }
  const GroupElement& coords() const { return coords_; }
  LocalShape shape() const { return local_shape(place_, n_); }

  bool is_zero() const { return coords_[0] == 0 && coords_[1] == 0 && coords_[2] == 0; }

  LocalCoords operator+(const LocalCoords& o) const {
    check_compatible(o);
    return {place_, n_, {coords_[0] + o.coords_[0], coords_[1] + o.coords_[1], coords_[2] + o.coords_[2]}};
  }
  LocalCoords scaled(i64 k) const { return {place_, n_, {coords_[0] * k, coords_[1] * k, coords_[2] * k}}; }

  void check_compatible(const LocalCoords& o) const {
    if (o.place_ != place_ || o.n_ != n_) throw DomainError("local classes at different places or moduli");
  }

  friend bool operator==(const LocalCoords&, const LocalCoords&) = default;
  friend auto operator<=>(const LocalCoords& a, const LocalCoords& b) {
    return std::tie(a.place_, a.n_, a.coords_) <=> std::tie(b.place_, b.n_, b.coords_);
  }

  std::string to_string() const {
    return place_.to_string() + "[" + std::to_string(coords_[0]) + "," + std::to_string(coords_[1]) + "," +
           std::to_string(coords_[2]) + "]";
  }

 private:
  Place place_;
  int n_;
  GroupElement coords_;
};

/// f in H^1(Q_v, Z/n): coordinates [frobenius, tame, wild].
using LocalClass = LocalCoords<Side::T>;
/// a in Q_v^*/(Q_v^*)^n: coordinates [valuation, tame unit index, wild unit index].
using LocalKummerClass = LocalCoords<Side::Dual>;

inline bool is_unramified(const LocalClass& f) {
  if (f.place().is_infinite()) return f.is_zero();
  return f.coords()[1] == 0 && f.coords()[2] == 0;
}

/// Order of the inertia image f(I_v) <= Z/n (at the real place, of f(Gal(C/R))).
inline i64 inertia_order(const LocalClass& f) {
  const auto m = local_shape(f.place(), f.n()).moduli();
  if (f.place().is_infinite()) return additive_order(f.coords()[0], m[0]);
  return lcm(additive_order(f.coords()[1], m[1]), additive_order(f.coords()[2], m[2]));
}

struct LocalCohomologyGroup {
  Place place = Place::infinity();
  int n = 2;
  Side side = Side::T;
  FiniteAbelianGroup carrier;
  Subgroup unramified{FiniteAbelianGroup(), {}};
  std::array<std::string, 3> coordinate_meaning;

  i64 order() const { return carrier.order(); }

  template <Side S>
  std::vector<LocalCoords<S>> elements() const {
    std::vector<LocalCoords<S>> out;
    for (auto& e : carrier.elements()) out.emplace_back(place, n, std::move(e));
    return out;
  }
};

inline LocalCohomologyGroup local_group(Place v, int n, Side side) {
  const LocalShape s = local_shape(v, n);
  FiniteAbelianGroup carrier(s.moduli());
  LocalCohomologyGroup g{v, n, side, carrier, Subgroup::trivial(carrier), {}};
  if (v.is_finite()) g.unramified = Subgroup(carrier, {{1, 0, 0}});
  if (v.is_infinite()) {
    g.coordinate_meaning = side == Side::T ? std::array<std::string, 3>{"conjugation", "-", "-"}
                                           : std::array<std::string, 3>{"sign", "-", "-"};
  } else {
    g.coordinate_meaning = side == Side::T ? std::array<std::string, 3>{"frobenius", "tame", "wild"}
                                           : std::array<std::string, 3>{"valuation", "tame-unit", "wild-unit"};
  }
  return g;
}

/// |H^0(Q_v, Z/n)| = n at every place (trivial action).
inline i64 local_h0_order(Place, int n) { return n; }

inline UnitRootExponent local_tate_pair(const LocalClass& f, const LocalKummerClass& a) {
  if (f.place() != a.place() || f.n() != a.n()) throw DomainError("local_tate_pair: place or modulus mismatch");
  return character_pairing(f.coords(), a.coords(), FiniteAbelianGroup(local_shape(f.place(), f.n()).moduli()));
}

/// Exponent of the Artin conductor of f viewed as a character of Q_p^*.
inline int conductor_exponent(const LocalClass& f) {
  if (f.place().is_infinite()) return 0;
  const LocalShape s = f.shape();
  const i64 t = f.coords()[1];
  const i64 w = f.coords()[2];
  if (t == 0 && w == 0) return 0;
  const bool two = f.place().prime() == 2;
  if (w == 0) return two ? 2 : 1;
  const int r = valuation(additive_order(w, s.wild), f.place().prime());
  return two ? r + 2 : r + 1;
}

/// Class of num/den in Q_v^*/(Q_v^*)^n.
inline LocalKummerClass restrict_rational(i64 num, i64 den, Place v, int n) {
  if (num == 0 || den == 0) throw DomainError("restrict_rational: zero has no Kummer class");
  if (v.is_infinite()) return {v, n, {(num < 0) != (den < 0) ? 1 : 0, 0, 0}};
  const i64 p = v.prime();
  int vn = 0, vd = 0;
  while (num % p == 0) {
    num /= p;
    ++vn;
  }
  while (den % p == 0) {
    den /= p;
    ++vd;
  }
  const UnitCoordinates uc(p, n);
  return {v, n, {vn - vd, uc.tame_index(num) - uc.tame_index(den), uc.wild_index(num) - uc.wild_index(den)}};
}

inline LocalKummerClass restrict_rational(i64 a, Place v, int n) { return restrict_rational(a, 1, v, n); }

// ---------------------------------------------------------------------------
// Orderings

enum class OrderingKind { DiscRegular, Radical, Custom };

/// Key of a custom ordering entry: either the order of the inertia image, or the
/// exact inertia coordinates (tame, wild). Coordinate entries win over order entries.
struct InertiaPattern {
  bool by_coords = false;
  i64 order = 1;
  i64 tame = 0;
  i64 wild = 0;

  static InertiaPattern of_order(i64 d) { return {false, d, 0, 0}; }
  static InertiaPattern of_coords(i64 t, i64 w) { return {true, 1, t, w}; }

  std::string to_string() const {
    return by_coords ? "c" + std::to_string(tame) + "." + std::to_string(wild) : "o" + std::to_string(order);
  }
  friend auto operator<=>(const InertiaPattern&, const InertiaPattern&) = default;
};

/// An admissible ordering: nu_p(inv(f)) as a function of p and the local class.
///
/// Custom orderings are tables keyed by (p mod modulus, inertia pattern);
/// exceptional places carry their own (place, inertia pattern) table.
class OrderingSpec {
 public:
  using Table = std::map<std::pair<i64, InertiaPattern>, int>;

  static OrderingSpec disc_regular() { return OrderingSpec(OrderingKind::DiscRegular); }
  static OrderingSpec radical() { return OrderingSpec(OrderingKind::Radical); }

  static OrderingSpec custom(i64 modulus, Table generic, Table exceptional = {}) {
    OrderingSpec o(OrderingKind::Custom);
    o.modulus_ = modulus;
    o.generic_ = std::move(generic);
    o.exceptional_ = std::move(exceptional);
    o.validate();
    return o;
  }

  OrderingKind kind() const { return kind_; }
  i64 modulus() const { return modulus_; }
  const Table& generic_table() const { return generic_; }
  const Table& exceptional_table() const { return exceptional_; }

  std::set<i64> exceptional_places() const {
    std::set<i64> out;
    for (const auto& [key, e] : exceptional_) out.insert(key.first);
    return out;
  }

  std::string name() const {
    switch (kind_) {
      case OrderingKind::DiscRegular: return "disc";
      case OrderingKind::Radical: return "radical";
      case OrderingKind::Custom: return "custom";
    }
    return "?";
  }

  int exponent(const LocalClass& f) const {
    if (f.place().is_infinite()) return 0;
    switch (kind_) {
      case OrderingKind::DiscRegular: {
        int total = 0;
        for (int k = 1; k < f.n(); ++k) total += conductor_exponent(f.scaled(k));
        return total;
      }
      case OrderingKind::Radical: return is_unramified(f) ? 0 : 1;
      case OrderingKind::Custom: return custom_exponent(f);
    }
    return 0;
  }

  friend bool operator==(const OrderingSpec&, const OrderingSpec&) = default;

 private:
  explicit OrderingSpec(OrderingKind k) : kind_(k) {}

  static const int* lookup(const Table& table, i64 key, const LocalClass& f) {
    const auto coords = InertiaPattern::of_coords(f.coords()[1], f.coords()[2]);
    if (auto it = table.find({key, coords}); it != table.end()) return &it->second;
    if (auto it = table.find({key, InertiaPattern::of_order(inertia_order(f))}); it != table.end()) return &it->second;
    return nullptr;
  }

  int custom_exponent(const LocalClass& f) const {
    const i64 p = f.place().prime();
    const bool exceptional = exceptional_places().count(p) != 0;
    const i64 key = exceptional ? p : mod(p, modulus_);
    if (const int* e = lookup(exceptional ? exceptional_ : generic_, key, f)) return *e;
    if (is_unramified(f)) return 0;
    throw DomainError("custom ordering: no entry for " + std::string(exceptional ? "place " : "class ") +
                      std::to_string(key) + " and inertia pattern " +
                      InertiaPattern::of_coords(f.coords()[1], f.coords()[2]).to_string());
  }

  void validate() const {
    if (modulus_ < 1) throw DomainError("custom ordering: modulus must be positive");
    for (const auto& [key, e] : generic_) {
      const auto& [residue, pattern] = key;
      if (residue < 0 || residue >= modulus_ || std::gcd(residue, modulus_) != 1) {
        throw DomainError("custom ordering: residue " + std::to_string(residue) + " is not a unit mod " +
                          std::to_string(modulus_));
      }
      const bool unramified = pattern.by_coords ? (pattern.tame == 0 && pattern.wild == 0) : pattern.order == 1;
      if (unramified && e != 0) throw DomainError("custom ordering: unramified classes must have exponent 0");
      if (!unramified && e < 1) throw DomainError("custom ordering: ramified classes need exponent >= 1");
    }
    for (const auto& [key, e] : exceptional_) {
      if (!is_prime(key.first)) throw DomainError("custom ordering: exceptional key is not a prime");
      if (e < 0) throw DomainError("custom ordering: negative exponent");
    }
  }

  OrderingKind kind_;
  i64 modulus_ = 1;
  Table generic_;
  Table exceptional_;
};

inline int inv_exponent(const LocalClass& f, const OrderingSpec& ordering) { return ordering.exponent(f); }

}  // namespace galcount
