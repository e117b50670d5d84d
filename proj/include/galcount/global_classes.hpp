#pragma once

// Global classes: H^1(Q, Z/n) as primitive Dirichlet characters and
// H^1(Q, mu_n) = Q^*/(Q^*)^n, with localization and enumeration by weight.
//
// A character is stored through its idelic restrictions to the local unit
// groups: for each prime q of its conductor a nonzero rho_q in
// Hom(Z_q^*, Z/n), in the (tame, wild) coordinates of local-cohomology.
// The Dirichlet character is chi(a) = -sum_q rho_q(a); the local restrictions
// at other places follow from triviality on Q^*.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "galcount/arith.hpp"
#include "galcount/error.hpp"
#include "galcount/group_core.hpp"
#include "galcount/local_cohomology.hpp"
#include "galcount/local_conditions.hpp"
#include "galcount/place.hpp"

namespace galcount {

struct CharacterComponent {
  i64 prime = 2;
  i64 tame = 0;
  i64 wild = 0;
  friend auto operator<=>(const CharacterComponent&, const CharacterComponent&) = default;
};

namespace detail {

/// rho(a) in Z/n for the unit character with coordinates (tame, wild) at p.
inline i64 unit_character_value(const UnitCoordinates& uc, i64 tame, i64 wild, i64 a, int n) {
  const LocalShape& s = uc.shape();
  i64 v = 0;
  if (tame != 0) v += mulmod(mulmod(tame, uc.tame_index(a), n), n / s.tame, n);
  if (wild != 0) v += mulmod(mulmod(wild, uc.wild_index(a), n), n / s.wild, n);
  return mod(v, n);
}

/// The real-place coordinate for the value psi_inf(-1) in Z/n.
inline i64 infinity_coordinate(i64 value, int n) {
  value = mod(value, n);
  if (n % 2 != 0) {
    if (value != 0) throw DomainError("odd character with nonzero value at the real place");
    return 0;
  }
  if (value != 0 && value != n / 2) throw DomainError("value at complex conjugation is not 2-torsion");
  return value == 0 ? 0 : 1;
}

}  // namespace detail

/// Canonical generators of (Z/m)^*: per prime power q^e || m, lifted to be 1 mod the other parts.
/// Odd q: the canonical primitive root mod q^2; q = 2: -1 (e >= 2) and 5 (e >= 3).
inline std::vector<std::pair<i64, i64>> unit_generators(i64 modulus) {
  std::vector<std::pair<i64, i64>> out;  // (prime, generator)
  for (const auto& [q, e] : factorize(modulus)) {
    const i64 qe = ipow(q, e);
    const i64 rest = modulus / qe;
    auto lift = [&](i64 g) { return rest == 1 ? mod(g, qe) : crt_pair(mod(g, qe), qe, 1, rest); };
    if (q == 2) {
      if (e >= 2) out.emplace_back(2, lift(-1));
      if (e >= 3) out.emplace_back(2, lift(5));
    } else {
      out.emplace_back(q, lift(canonical_primitive_root(q)));
    }
  }
  return out;
}

class GlobalCharacter {
 public:
  explicit GlobalCharacter(int n, std::vector<CharacterComponent> components = {}) : n_(n) {
    if (n < 2) throw DomainError("characters need n >= 2");
    for (auto& c : components) {
      const LocalShape s = local_shape(Place::prime(c.prime), n);
      c.tame = mod(c.tame, s.tame);
      c.wild = mod(c.wild, s.wild);
      if (c.tame != 0 || c.wild != 0) components_.push_back(c);
    }
    std::sort(components_.begin(), components_.end());
    for (std::size_t i = 1; i < components_.size(); ++i) {
      if (components_[i].prime == components_[i - 1].prime) throw DomainError("duplicate character component");
    }
  }

  static GlobalCharacter trivial(int n) { return GlobalCharacter(n); }

  /// Normalizes a (possibly imprimitive) value table on unit_generators(modulus).
  static GlobalCharacter from_value_table(int n, i64 modulus, const std::vector<i64>& values) {
    if (modulus < 1) throw DomainError("modulus must be positive");
    const auto gens = unit_generators(modulus);
    if (gens.size() != values.size()) {
      throw DomainError("value table has " + std::to_string(values.size()) + " entries, modulus " +
                        std::to_string(modulus) + " needs " + std::to_string(gens.size()));
    }
    std::vector<CharacterComponent> comps;
    for (const auto& [q, e] : factorize(modulus)) {
      const UnitCoordinates uc(q, n);
      const LocalShape& s = uc.shape();
      std::optional<CharacterComponent> found;
      for (i64 t = 0; t < s.tame && !found; ++t) {
        for (i64 w = 0; w < s.wild && !found; ++w) {
          bool ok = conductor_exponent(LocalClass(Place::prime_unchecked(q), n, {0, t, w})) <= e;
          for (std::size_t i = 0; i < gens.size() && ok; ++i) {
            if (gens[i].first != q) continue;
            ok = mod(-detail::unit_character_value(uc, t, w, gens[i].second, n), n) == mod(values[i], n);
          }
          if (ok) found = CharacterComponent{q, t, w};
        }
      }
      if (!found) throw DomainError("value table is not a character of order dividing n at " + std::to_string(q));
      comps.push_back(*found);
    }
    return GlobalCharacter(n, comps);
  }

  int n() const { return n_; }
  const std::vector<CharacterComponent>& components() const { return components_; }
  bool is_trivial() const { return components_.empty(); }

  std::vector<i64> support() const {
    std::vector<i64> out;
    for (const auto& c : components_) out.push_back(c.prime);
    return out;
  }

  /// Conductor.
  i64 modulus() const {
    i64 m = 1;
    for (const auto& c : components_) m *= ipow(c.prime, conductor_exponent(unit_class(c)));
    return m;
  }

  /// chi(a) in Z/n for a prime to the conductor.
  i64 value(i64 a) const {
    i64 v = 0;
    for (const auto& c : components_) v -= rho(c, a);
    return mod(v, n_);
  }

  std::vector<i64> value_table() const {
    std::vector<i64> out;
    for (const auto& [q, g] : unit_generators(modulus())) out.push_back(value(g));
    return out;
  }

  /// Order of the image in Z/n.
  i64 image_order() const {
    i64 d = 1;
    for (const auto& c : components_) d = lcm(d, inertia_order(unit_class(c)));
    return d;
  }

  LocalClass restrict_to(Place v) const {
    if (v.is_infinite()) {
      i64 s = 0;
      for (const auto& c : components_) s -= rho(c, -1);
      return {v, n_, {detail::infinity_coordinate(s, n_), 0, 0}};
    }
    const i64 p = v.prime();
    i64 frob = 0;
    i64 tame = 0;
    i64 wild = 0;
    for (const auto& c : components_) {
      if (c.prime == p) {
        tame = c.tame;
        wild = c.wild;
      } else {
        frob -= rho(c, p);
      }
    }
    return {v, n_, {frob, tame, wild}};
  }

  /// N(inv(f)) under the ordering, saturating at `cap`.
  u64 weight(const OrderingSpec& ordering, u64 cap = ~u64{0}) const {
    u64 w = 1;
    auto mul = [&](i64 p, int e) {
      const u64 f = saturating_pow(static_cast<u64>(p), e, cap);
      w = (f != 0 && w > cap / f) ? cap : std::min(cap, w * f);
    };
    std::set<i64> seen;
    for (const auto& c : components_) {
      mul(c.prime, ordering.exponent(restrict_to(Place::prime(c.prime))));
      seen.insert(c.prime);
    }
    for (i64 p : ordering.exceptional_places()) {
      if (!seen.count(p)) mul(p, ordering.exponent(restrict_to(Place::prime(p))));
    }
    return w;
  }

  /// "weight,modulus,v1:v2:..."
  std::string serialize(const OrderingSpec& ordering) const {
    std::string out = std::to_string(weight(ordering)) + "," + std::to_string(modulus()) + ",";
    const auto vt = value_table();
    for (std::size_t i = 0; i < vt.size(); ++i) {
      if (i > 0) out += ':';
      out += std::to_string(vt[i]);
    }
    return out;
  }

  static GlobalCharacter parse(int n, const std::string& line, const OrderingSpec& ordering) {
    const auto parts = detail::split(line, ',');
    if (parts.size() != 3) throw DomainError("character record needs weight,modulus,valuetable");
    const i64 weight = detail::parse_int(parts[0], "weight");
    const i64 modulus = detail::parse_int(parts[1], "modulus");
    std::vector<i64> values;
    if (!parts[2].empty()) {
      for (const auto& v : detail::split(parts[2], ':')) values.push_back(detail::parse_int(v, "value"));
    }
    GlobalCharacter f = from_value_table(n, modulus, values);
    if (f.modulus() != modulus) throw DomainError("character record is not primitive");
    if (static_cast<i64>(f.weight(ordering)) != weight) throw DomainError("character record has wrong weight");
    return f;
  }

  friend bool operator==(const GlobalCharacter&, const GlobalCharacter&) = default;

 private:
  LocalClass unit_class(const CharacterComponent& c) const {
    return {Place::prime_unchecked(c.prime), n_, {0, c.tame, c.wild}};
  }
  i64 rho(const CharacterComponent& c, i64 a) const {
    return detail::unit_character_value(UnitCoordinates(c.prime, n_), c.tame, c.wild, a, n_);
  }

  int n_;
  std::vector<CharacterComponent> components_;
};

inline LocalClass restrict_character(const GlobalCharacter& f, Place v) { return f.restrict_to(v); }

inline bool is_surjective(const GlobalCharacter& f) { return f.image_order() == f.n(); }

/// Moebius inversion over the divisor lattice: counts[d] = #classes with image in the order-d subgroup.
inline i64 surjective_count(const std::map<i64, i64>& counts_by_divisor, int n) {
  i64 total = 0;
  for (const auto& [d, mu] : mobius_divisor_lattice(n)) {
    auto it = counts_by_divisor.find(d);
    if (it == counts_by_divisor.end()) throw DomainError("surjective_count: missing divisor " + std::to_string(d));
    total += mu * it->second;
  }
  return total;
}

/// An element of Q^*/(Q^*)^n: sign * prod p^e with 0 < e < n; the sign is kept only for even n.
class GlobalKummerClass {
 public:
  GlobalKummerClass(int n, int sign, std::map<i64, int> exponents) : n_(n), sign_(sign < 0 && n % 2 == 0 ? -1 : 1) {
    if (n < 2) throw DomainError("Kummer classes need n >= 2");
    for (const auto& [p, e] : exponents) {
      if (!is_prime(p)) throw DomainError("Kummer class support must be prime");
      const int r = static_cast<int>(mod(e, n));
      if (r != 0) exponents_[p] = r;
    }
  }

  static GlobalKummerClass identity(int n) { return {n, 1, {}}; }

  static GlobalKummerClass from_rational(int n, i64 num, i64 den = 1) {
    if (num == 0 || den == 0) throw DomainError("zero has no Kummer class");
    std::map<i64, int> ex;
    for (const auto& [p, e] : factorize(num < 0 ? -num : num)) ex[p] += e;
    for (const auto& [p, e] : factorize(den < 0 ? -den : den)) ex[p] -= e;
    return {n, (num < 0) != (den < 0) ? -1 : 1, ex};
  }

  int n() const { return n_; }
  int sign() const { return sign_; }
  const std::map<i64, int>& exponents() const { return exponents_; }
  bool is_identity() const { return sign_ == 1 && exponents_.empty(); }

  /// |canonical representative|, saturating.
  u64 abs_value(u64 cap = ~u64{0}) const {
    u64 v = 1;
    for (const auto& [p, e] : exponents_) {
      const u64 f = saturating_pow(static_cast<u64>(p), e, cap);
      v = (v > cap / f) ? cap : std::min(cap, v * f);
    }
    return v;
  }

  LocalKummerClass restrict_to(Place v) const {
    if (v.is_infinite()) return {v, n_, {sign_ < 0 ? 1 : 0, 0, 0}};
    const i64 p = v.prime();
    const UnitCoordinates uc(p, n_);
    i64 val = 0;
    i64 tame = sign_ < 0 ? uc.tame_index(-1) : 0;
    i64 wild = sign_ < 0 ? uc.wild_index(-1) : 0;
    for (const auto& [q, e] : exponents_) {
      if (q == p) {
        val = e;
      } else {
        tame += e * uc.tame_index(q);
        wild += e * uc.wild_index(q);
      }
    }
    return {v, n_, {val, tame, wild}};
  }

  std::string to_string() const {
    const u64 v = abs_value();
    if (v != ~u64{0}) return (sign_ < 0 ? "-" : "") + std::to_string(v);
    std::string out = sign_ < 0 ? "-" : "";
    bool first = true;
    for (const auto& [p, e] : exponents_) {
      out += (first ? "" : "*") + std::to_string(p) + (e > 1 ? "^" + std::to_string(e) : "");
      first = false;
    }
    return out;
  }

  friend auto operator<=>(const GlobalKummerClass&, const GlobalKummerClass&) = default;

 private:
  int n_;
  int sign_;
  std::map<i64, int> exponents_;
};

/// sum_v <res_v f, res_v a>; zero by global reciprocity.
inline UnitRootExponent reciprocity_defect(const GlobalCharacter& f, const GlobalKummerClass& a) {
  if (f.n() != a.n()) throw DomainError("reciprocity_defect: different n");
  std::set<Place> places{Place::infinity()};
  for (i64 p : f.support()) places.insert(Place::prime(p));
  for (const auto& [p, e] : a.exponents()) places.insert(Place::prime(p));
  for (const auto& [p, e] : factorize(f.n())) places.insert(Place::prime(p));
  UnitRootExponent total;
  for (Place v : places) total = total + local_tate_pair(f.restrict_to(v), a.restrict_to(v));
  return total;
}

// ---------------------------------------------------------------------------
// Enumeration

/// A character met during enumeration; valid only inside the visitor call.
struct CharacterView {
  int n;
  const std::vector<CharacterComponent>& components;
  u64 weight;
  i64 image_order;

  GlobalCharacter materialize() const { return GlobalCharacter(n, components); }
};

/// Depth-first enumeration of {f : weight(f) < X, res_v f in L_v for all v}.
///
/// Primes are visited in increasing order; a branch is cut once the running
/// weight times p^l reaches X, where l is the least exponent of any ramified
/// allowed class. Where L_p is a union of H^1_ur cosets, membership depends on
/// the inertia part only and is settled when choosing components; other places
/// are checked on the finished character.
class CharacterEnumerator {
 public:
  CharacterEnumerator(const ConditionFamily& family, const OrderingSpec& ordering, u64 bound, i64 max_primes = 0)
      : family_(family), ordering_(ordering), bound_(bound), n_(family.n()) {
    for (i64 p : family_.generic_representatives(ordering_.modulus(), ordering_.exceptional_places())) {
      const Place v = Place::prime_unchecked(p);
      const auto members = family_.members(v);
      if (!shape_flags(members, v, n_).contains_unramified) {
        throw DomainError("enumeration needs H^1_ur inside L_p at generic places (fails at p = " +
                          std::to_string(p) + ")");
      }
      if (auto e = detail::minimal_ramified_exponent(members, ordering_)) least_ = std::min(least_, *e);
    }
    std::set<i64> special = ordering_.exceptional_places();
    for (const auto& [v, l] : family_.exceptional()) {
      if (v.is_finite()) special.insert(v.prime());
    }
    for (i64 p : special) {
      if (auto e = detail::minimal_ramified_exponent(family_.members(Place::prime(p)), ordering_)) {
        least_ = std::min(least_, *e);
      }
    }

    i64 limit = 1;
    if (bound_ > 1 && least_ < kNoRamification) {
      // largest p with p^least < bound
      limit = static_cast<i64>(std::pow(static_cast<double>(bound_ - 1), 1.0 / least_)) + 2;
      while (limit > 1 && saturating_pow(static_cast<u64>(limit), least_, bound_) >= bound_) --limit;
    }
    if (generic_ramification()) {
      if (max_primes > 0 && limit > max_primes) {
        throw ResourceCapError("enumeration needs primes up to " + std::to_string(limit) + ", above the cap " +
                               std::to_string(max_primes));
      }
      sieve_ = std::make_unique<PrimeSieve>(limit);
      primes_ = sieve_->primes();
    }
    for (i64 p : special) {
      if (p <= limit && !std::binary_search(primes_.begin(), primes_.end(), p)) primes_.push_back(p);
    }
    std::sort(primes_.begin(), primes_.end());
    data_.resize(primes_.size());

    for (const auto& [v, l] : family_.exceptional()) {
      const auto members = l.instantiate(v, n_);
      if (v.is_infinite()) {
        if (static_cast<i64>(members.size()) < local_shape(v, n_).order()) checked_unramified_.push_back(v);
      } else if (!shape_flags(members, v, n_).contains_unramified) {
        checked_unramified_.push_back(v);
      }
    }
    for (i64 p : ordering_.exceptional_places()) weighted_unramified_.push_back(p);
  }

  template <class Visitor>
  void for_each(Visitor&& visit) {
    if (bound_ <= 1) return;
    std::vector<CharacterComponent> comps;
    std::vector<std::size_t> idx;
    descend(0, 1, comps, idx, visit);
  }

 private:
  static constexpr int kNoRamification = 1 << 20;

  struct Option {
    i64 tame;
    i64 wild;
    u64 factor;
    i64 order;
  };
  struct PrimeData {
    bool ready = false;
    std::unique_ptr<UnitCoordinates> uc;
    std::vector<Option> options;
    bool inertia_determined = true;
  };

  bool generic_ramification() const {
    for (i64 p : family_.generic_representatives(ordering_.modulus(), ordering_.exceptional_places())) {
      const Place v = Place::prime_unchecked(p);
      if (detail::minimal_ramified_exponent(family_.members(v), ordering_)) return true;
    }
    return false;
  }

  PrimeData& data(std::size_t i) {
    PrimeData& d = data_[i];
    if (d.ready) return d;
    const i64 p = primes_[i];
    const Place v = Place::prime_unchecked(p);
    d.uc = std::make_unique<UnitCoordinates>(p, n_);
    const LocalSubset& l = family_.local_set(v);
    const LocalShape s = local_shape(v, n_);
    const auto members = l.instantiate(v, n_);
    d.inertia_determined = shape_flags(members, v, n_).unramified_closed;
    std::set<std::pair<i64, i64>> allowed;
    for (const auto& f : members) allowed.emplace(f.coords()[1], f.coords()[2]);
    for (i64 t = 0; t < s.tame; ++t) {
      for (i64 w = 0; w < s.wild; ++w) {
        if ((t == 0 && w == 0) || !allowed.count({t, w})) continue;
        const LocalClass f(v, n_, {0, t, w});
        const int e = ordering_.exponent(f);
        d.options.push_back({t, w, saturating_pow(static_cast<u64>(p), e, bound_), inertia_order(f)});
      }
    }
    std::sort(d.options.begin(), d.options.end(), [](const Option& a, const Option& b) {
      return std::tie(a.factor, a.tame, a.wild) < std::tie(b.factor, b.tame, b.wild);
    });
    d.ready = true;
    return d;
  }

  i64 rho(std::size_t i, const CharacterComponent& c, i64 a) {
    return detail::unit_character_value(*data(i).uc, c.tame, c.wild, a, n_);
  }

  LocalClass restrict_at(Place v, const std::vector<CharacterComponent>& comps, const std::vector<std::size_t>& idx) {
    if (v.is_infinite()) {
      i64 s = 0;
      for (std::size_t k = 0; k < comps.size(); ++k) s -= rho(idx[k], comps[k], -1);
      return {v, n_, {detail::infinity_coordinate(s, n_), 0, 0}};
    }
    const i64 p = v.prime();
    i64 frob = 0, tame = 0, wild = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      if (comps[k].prime == p) {
        tame = comps[k].tame;
        wild = comps[k].wild;
      } else {
        frob -= rho(idx[k], comps[k], p);
      }
    }
    return {v, n_, {frob, tame, wild}};
  }

  template <class Visitor>
  void finish(u64 weight, const std::vector<CharacterComponent>& comps, const std::vector<std::size_t>& idx,
              i64 order, Visitor& visit) {
    for (std::size_t k = 0; k < comps.size(); ++k) {
      if (data(idx[k]).inertia_determined) continue;
      if (!family_.contains(restrict_at(Place::prime_unchecked(comps[k].prime), comps, idx))) return;
    }
    auto in_support = [&](i64 p) {
      return std::any_of(comps.begin(), comps.end(), [p](const CharacterComponent& c) { return c.prime == p; });
    };
    for (Place v : checked_unramified_) {
      if (v.is_finite() && in_support(v.prime())) continue;
      if (!family_.contains(restrict_at(v, comps, idx))) return;
    }
    for (i64 p : weighted_unramified_) {
      if (in_support(p)) continue;
      const int e = ordering_.exponent(restrict_at(Place::prime_unchecked(p), comps, idx));
      const u64 f = saturating_pow(static_cast<u64>(p), e, bound_);
      if (weight >= (bound_ + f - 1) / f) return;
      weight *= f;
    }
    visit(CharacterView{n_, comps, weight, order});
  }

  template <class Visitor>
  void descend(std::size_t start, u64 weight, std::vector<CharacterComponent>& comps, std::vector<std::size_t>& idx,
               Visitor& visit) {
    finish(weight, comps, idx, comps.empty() ? 1 : order_, visit);
    for (std::size_t i = start; i < primes_.size(); ++i) {
      const u64 least = saturating_pow(static_cast<u64>(primes_[i]), least_, bound_);
      if (weight >= (bound_ + least - 1) / least) break;
      for (const Option& o : data(i).options) {
        if (weight >= (bound_ + o.factor - 1) / o.factor) break;
        const i64 saved = order_;
        order_ = comps.empty() ? o.order : lcm(order_, o.order);
        comps.push_back({primes_[i], o.tame, o.wild});
        idx.push_back(i);
        descend(i + 1, weight * o.factor, comps, idx, visit);
        comps.pop_back();
        idx.pop_back();
        order_ = saved;
      }
    }
  }

  const ConditionFamily& family_;
  const OrderingSpec& ordering_;
  u64 bound_;
  int n_;
  int least_ = kNoRamification;
  std::unique_ptr<PrimeSieve> sieve_;
  std::vector<i64> primes_;
  std::vector<PrimeData> data_;
  std::vector<Place> checked_unramified_;
  std::vector<i64> weighted_unramified_;
  i64 order_ = 1;
};

/// Visits every allowed character of weight < X (unsorted, deterministic order).
template <class Visitor>
void for_each_character(const ConditionFamily& family, const OrderingSpec& ordering, u64 bound, Visitor&& visit,
                        i64 max_primes = 0) {
  CharacterEnumerator e(family, ordering, bound, max_primes);
  e.for_each(visit);
}

struct EnumeratedCharacter {
  u64 weight;
  i64 modulus;
  std::vector<i64> values;
  GlobalCharacter character;
};

/// All allowed characters of weight < X, ordered by (weight, modulus, value table).
inline std::vector<EnumeratedCharacter> enumerate_characters(const ConditionFamily& family,
                                                             const OrderingSpec& ordering, u64 bound) {
  std::vector<EnumeratedCharacter> out;
  for_each_character(family, ordering, bound, [&](const CharacterView& view) {
    GlobalCharacter f = view.materialize();
    const i64 m = f.modulus();
    auto values = f.value_table();
    out.push_back({view.weight, m, std::move(values), std::move(f)});
  });
  std::sort(out.begin(), out.end(), [](const EnumeratedCharacter& a, const EnumeratedCharacter& b) {
    return std::tie(a.weight, a.modulus, a.values) < std::tie(b.weight, b.modulus, b.values);
  });
  return out;
}

}  // namespace galcount
