#pragma once

// Frobenian families of local conditions L = (L_v) and the invariants a, b, T'.
//
// A local subset is described by a union of atoms, each a coordinate predicate
// that instantiates at any place:
//   zero       the zero class
//   ur         unramified classes
//   full       every class
//   tame       classes with trivial wild coordinate
//   div(d)     classes whose inertia image has order dividing d
//   exact(d)   classes whose inertia image has order exactly d
//   split(d)   classes with f(-p) = 0 and inertia order dividing d
//   {a:b:c;..} an explicit list of coordinate triples
// Atoms are joined with '+', e.g. "ur+split(2)".

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "galcount/arith.hpp"
#include "galcount/cyclotomic.hpp"
#include "galcount/error.hpp"
#include "galcount/local_cohomology.hpp"
#include "galcount/place.hpp"

namespace galcount {

enum class AtomKind { Zero, Unramified, Full, Tame, InertiaDivides, InertiaExact, Split, Explicit };

struct SubsetAtom {
  AtomKind kind = AtomKind::Zero;
  i64 d = 1;
  std::vector<GroupElement> coords;

  bool contains(const LocalClass& f) const {
    const bool inf = f.place().is_infinite();
    switch (kind) {
      case AtomKind::Zero: return f.is_zero();
      case AtomKind::Unramified: return is_unramified(f);
      case AtomKind::Full: return true;
      case AtomKind::Tame: return inf || f.coords()[2] == 0;
      case AtomKind::InertiaDivides: return d % inertia_order(f) == 0;
      case AtomKind::InertiaExact: return inertia_order(f) == d;
      case AtomKind::Split: {
        if (inf) return f.is_zero();
        if (d % inertia_order(f) != 0) return false;
        const i64 p = f.place().prime();
        return local_tate_pair(f, restrict_rational(-p, f.place(), f.n())).is_zero();
      }
      case AtomKind::Explicit: {
        const auto m = f.shape().moduli();
        for (const auto& c : coords) {
          bool eq = true;
          for (std::size_t i = 0; i < 3; ++i) eq = eq && mod(c[i], m[i]) == f.coords()[i];
          if (eq) return true;
        }
        return false;
      }
    }
    return false;
  }

  std::string to_string() const {
    switch (kind) {
      case AtomKind::Zero: return "zero";
      case AtomKind::Unramified: return "ur";
      case AtomKind::Full: return "full";
      case AtomKind::Tame: return "tame";
      case AtomKind::InertiaDivides: return "div(" + std::to_string(d) + ")";
      case AtomKind::InertiaExact: return "exact(" + std::to_string(d) + ")";
      case AtomKind::Split: return "split(" + std::to_string(d) + ")";
      case AtomKind::Explicit: {
        std::string out = "{";
        for (std::size_t i = 0; i < coords.size(); ++i) {
          if (i > 0) out += ';';
          out += std::to_string(coords[i][0]) + ":" + std::to_string(coords[i][1]) + ":" + std::to_string(coords[i][2]);
        }
        return out + "}";
      }
    }
    return "?";
  }

  friend bool operator==(const SubsetAtom&, const SubsetAtom&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline i64 parse_int(std::string_view s, std::string_view what) {
  const std::string t = trim(s);
  if (t.empty()) throw DomainError("expected an integer for " + std::string(what));
  std::size_t pos = 0;
  i64 v = 0;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw DomainError("expected an integer for " + std::string(what) + ", got '" + t + "'");
  }
  if (pos != t.size()) throw DomainError("expected an integer for " + std::string(what) + ", got '" + t + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

/// A union of atoms; instantiates to a concrete subset of H^1(Q_v, Z/n).
class LocalSubset {
 public:
  LocalSubset() = default;
  explicit LocalSubset(std::vector<SubsetAtom> atoms) : atoms_(std::move(atoms)) {}

  static LocalSubset of(AtomKind k, i64 d = 1) { return LocalSubset({SubsetAtom{k, d, {}}}); }
  static LocalSubset zero() { return of(AtomKind::Zero); }
  static LocalSubset unramified() { return of(AtomKind::Unramified); }
  static LocalSubset full() { return of(AtomKind::Full); }
  static LocalSubset explicit_set(std::vector<GroupElement> coords) {
    return LocalSubset({SubsetAtom{AtomKind::Explicit, 1, std::move(coords)}});
  }

  static LocalSubset parse(std::string_view text) {
    std::vector<SubsetAtom> atoms;
    for (const std::string& tok : detail::split(text, '+')) {
      if (tok.empty()) throw DomainError("empty atom in local subset '" + std::string(text) + "'");
      if (tok == "zero") {
        atoms.push_back({AtomKind::Zero, 1, {}});
      } else if (tok == "ur") {
        atoms.push_back({AtomKind::Unramified, 1, {}});
      } else if (tok == "full") {
        atoms.push_back({AtomKind::Full, 1, {}});
      } else if (tok == "tame") {
        atoms.push_back({AtomKind::Tame, 1, {}});
      } else if (tok.front() == '{' && tok.back() == '}') {
        SubsetAtom a{AtomKind::Explicit, 1, {}};
        const std::string body = tok.substr(1, tok.size() - 2);
        if (!detail::trim(body).empty()) {
          for (const std::string& entry : detail::split(body, ';')) {
            const auto parts = detail::split(entry, ':');
            if (parts.size() != 3) throw DomainError("explicit class needs three coordinates: '" + entry + "'");
            a.coords.push_back({detail::parse_int(parts[0], "coordinate"), detail::parse_int(parts[1], "coordinate"),
                                detail::parse_int(parts[2], "coordinate")});
          }
        }
        atoms.push_back(std::move(a));
      } else {
        const auto open = tok.find('(');
        if (open == std::string::npos || tok.back() != ')') {
          throw DomainError("unknown local subset atom '" + tok + "'");
        }
        const std::string head = tok.substr(0, open);
        const i64 d = detail::parse_int(tok.substr(open + 1, tok.size() - open - 2), head);
        if (d < 1) throw DomainError("atom parameter must be positive: '" + tok + "'");
        if (head == "div") {
          atoms.push_back({AtomKind::InertiaDivides, d, {}});
        } else if (head == "exact") {
          atoms.push_back({AtomKind::InertiaExact, d, {}});
        } else if (head == "split") {
          atoms.push_back({AtomKind::Split, d, {}});
        } else {
          throw DomainError("unknown local subset atom '" + tok + "'");
        }
      }
    }
    return LocalSubset(std::move(atoms));
  }

  const std::vector<SubsetAtom>& atoms() const { return atoms_; }

  bool contains(const LocalClass& f) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const SubsetAtom& a) { return a.contains(f); });
  }

  std::vector<LocalClass> instantiate(Place v, int n) const {
    std::vector<LocalClass> out;
    for (auto& f : local_group(v, n, Side::T).elements<Side::T>()) {
      if (contains(f)) out.push_back(std::move(f));
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i > 0) out += '+';
      out += atoms_[i].to_string();
    }
    return out.empty() ? "{}" : out;
  }

  friend bool operator==(const LocalSubset&, const LocalSubset&) = default;

 private:
  std::vector<SubsetAtom> atoms_;
};

/// Generic local conditions keyed by p mod modulus; classes without an entry use the fallback.
struct FrobenianRule {
  i64 modulus = 1;
  std::map<i64, LocalSubset> classes;
  LocalSubset fallback = LocalSubset::full();

  const LocalSubset& at(i64 p) const {
    if (auto it = classes.find(mod(p, modulus)); it != classes.end()) return it->second;
    return fallback;
  }

  friend bool operator==(const FrobenianRule&, const FrobenianRule&) = default;
};

/// How the local sets at generic places relate to H^1_ur.
struct LocalShapeFlags {
  bool contains_zero = false;
  bool contains_unramified = false;
  bool unramified_closed = false;  // L + H^1_ur = L
};

inline LocalShapeFlags shape_flags(const std::vector<LocalClass>& members, Place v, int n) {
  LocalShapeFlags fl;
  std::set<GroupElement> set;
  for (const auto& f : members) set.insert(f.coords());
  fl.contains_zero = set.count({0, 0, 0}) != 0;
  if (v.is_infinite()) {
    fl.contains_unramified = fl.contains_zero;
    fl.unramified_closed = true;
    return fl;
  }
  fl.contains_unramified = true;
  for (i64 k = 0; k < n; ++k) fl.contains_unramified = fl.contains_unramified && set.count({k, 0, 0}) != 0;
  fl.unramified_closed = true;
  for (const auto& c : set) {
    if (set.count({mod(c[0] + 1, n), c[1], c[2]}) == 0) {
      fl.unramified_closed = false;
      break;
    }
  }
  return fl;
}

class ConditionFamily {
 public:
  ConditionFamily(int n, FrobenianRule generic, std::map<Place, LocalSubset> exceptional, std::string name = "custom")
      : n_(n), generic_(std::move(generic)), exceptional_(std::move(exceptional)), name_(std::move(name)) {
    if (n_ < 2) throw DomainError("family needs n >= 2");
    if (generic_.modulus < 1) throw DomainError("family rule modulus must be positive");
    if (!exceptional_.count(Place::infinity())) exceptional_.emplace(Place::infinity(), LocalSubset::full());
    std::vector<i64> forced{2};
    for (const auto& [q, e] : factorize(n_)) forced.push_back(q);
    for (i64 q : forced) {
      if (!exceptional_.count(Place::prime(q))) exceptional_.emplace(Place::prime(q), generic_.at(q));
    }
  }

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  const FrobenianRule& generic() const { return generic_; }
  const std::map<Place, LocalSubset>& exceptional() const { return exceptional_; }

  std::set<Place> irregular_places() const {
    std::set<Place> s;
    for (const auto& [v, l] : exceptional_) s.insert(v);
    return s;
  }
  bool is_irregular(Place v) const { return exceptional_.count(v) != 0; }

  const LocalSubset& local_set(Place v) const {
    if (auto it = exceptional_.find(v); it != exceptional_.end()) return it->second;
    return generic_.at(v.prime());
  }

  std::vector<LocalClass> members(Place v) const { return local_set(v).instantiate(v, n_); }

  bool contains(const LocalClass& f) const {
    if (f.n() != n_) throw DomainError("membership: class and family have different n");
    return local_set(f.place()).contains(f);
  }

  /// Returns the first place (generic representative or exceptional) whose L_v misses 0, if any.
  std::optional<Place> missing_identity() const {
    for (const auto& [v, l] : exceptional_) {
      if (!l.contains(LocalClass::zero(v, n_))) return v;
    }
    for (i64 p : generic_representatives(1)) {
      const Place v = Place::prime_unchecked(p);
      if (!generic_.at(p).contains(LocalClass::zero(v, n_))) return v;
    }
    return std::nullopt;
  }

  /// One prime per unit class c mod M = lcm(rule modulus, extra, n), avoiding irregular places and `avoid`.
  std::vector<i64> generic_representatives(i64 extra_modulus, const std::set<i64>& avoid = {}) const {
    const i64 big = lcm(lcm(generic_.modulus, extra_modulus), static_cast<i64>(n_));
    std::vector<i64> reps;
    for (i64 c = 1; c <= big; ++c) {
      if (std::gcd(c, big) != 1) continue;
      i64 p = c;
      while (!is_prime(p) || is_irregular(Place::prime_unchecked(p)) || avoid.count(p) || n_ % p == 0) {
        p += big;
        if (p > big * 100000) throw DomainError("no representative prime found for class " + std::to_string(c));
      }
      reps.push_back(p);
    }
    return reps;
  }

  /// Rule moduli combined with an ordering's modulus.
  i64 combined_modulus(const OrderingSpec& ordering) const {
    return lcm(lcm(generic_.modulus, ordering.modulus()), static_cast<i64>(n_));
  }

 private:
  int n_;
  FrobenianRule generic_;
  std::map<Place, LocalSubset> exceptional_;
  std::string name_;
};

inline bool membership(const LocalClass& f, const ConditionFamily& family) { return family.contains(f); }

// ---------------------------------------------------------------------------
// Built-in families

inline std::vector<std::string> builtin_family_names() {
  return {"full", "unramified", "tame", "real", "d1mod4", "box:<places>", "div:<d>"};
}

inline ConditionFamily builtin_family(std::string_view name, int n) {
  const std::string s(name);
  const Place inf = Place::infinity();
  if (s == "full") return ConditionFamily(n, FrobenianRule{}, {}, s);
  if (s == "unramified") {
    FrobenianRule r{1, {}, LocalSubset::unramified()};
    return ConditionFamily(n, r, {{inf, LocalSubset::full()}}, s);
  }
  if (s == "tame") {
    FrobenianRule r{1, {}, LocalSubset::full()};
    std::map<Place, LocalSubset> ex{{Place::prime(2), LocalSubset::unramified()}};
    for (const auto& [q, e] : factorize(n)) {
      if (q != 2) ex.emplace(Place::prime(q), LocalSubset::of(AtomKind::Tame));
    }
    return ConditionFamily(n, r, ex, s);
  }
  if (s == "real") return ConditionFamily(n, FrobenianRule{}, {{inf, LocalSubset::zero()}}, s);
  if (s == "d1mod4") {
    if (n != 2) throw DomainError("family d1mod4 is defined for n = 2 only");
    FrobenianRule r{1, {}, LocalSubset::parse("ur+split(2)")};
    return ConditionFamily(n, r, {{Place::prime(2), LocalSubset::unramified()}, {inf, LocalSubset::full()}}, s);
  }
  if (s.rfind("box:", 0) == 0) {
    FrobenianRule r{1, {}, LocalSubset::unramified()};
    std::map<Place, LocalSubset> ex{{inf, LocalSubset::full()}};
    for (const std::string& tok : detail::split(s.substr(4), ',')) {
      if (tok.empty()) continue;
      ex[Place::parse(tok)] = LocalSubset::full();
    }
    for (const auto& [q, e] : factorize(n)) ex.emplace(Place::prime(q), LocalSubset::unramified());
    ex.emplace(Place::prime(2), LocalSubset::unramified());
    return ConditionFamily(n, r, ex, s);
  }
  if (s.rfind("div:", 0) == 0) {
    const i64 d = detail::parse_int(s.substr(4), "div family");
    if (d < 1 || n % d != 0) throw DomainError("div family parameter must divide n");
    return ConditionFamily(n, FrobenianRule{1, {}, LocalSubset::of(AtomKind::InertiaDivides, d)}, {}, s);
  }
  throw DomainError("unknown built-in family '" + s + "'");
}

// ---------------------------------------------------------------------------
// Classification and invariants

enum class FamilyClass { Both, NonperiodicEligible, Neither };

inline std::string to_string(FamilyClass c) {
  switch (c) {
    case FamilyClass::Both: return "both";
    case FamilyClass::NonperiodicEligible: return "nonperiodic-eligible";
    case FamilyClass::Neither: return "neither";
  }
  return "?";
}

/// Periodic-eligible: generic L_p is a union of H^1_ur cosets including the zero coset.
/// Nonperiodic-eligible: generic L_p contains H^1_ur. Irregular places are the allowed slack.
/// Periodic eligibility implies the weaker one, so "periodic-eligible" alone never occurs.
inline FamilyClass classify_family(const ConditionFamily& family) {
  bool periodic = true;
  bool nonperiodic = true;
  for (i64 p : family.generic_representatives(1)) {
    const Place v = Place::prime_unchecked(p);
    const auto fl = shape_flags(family.members(v), v, family.n());
    periodic = periodic && fl.unramified_closed && fl.contains_zero;
    nonperiodic = nonperiodic && fl.contains_unramified;
  }
  if (periodic && nonperiodic) return FamilyClass::Both;
  if (nonperiodic) return FamilyClass::NonperiodicEligible;
  return FamilyClass::Neither;
}

inline bool is_periodic_eligible(const ConditionFamily& family) {
  return classify_family(family) == FamilyClass::Both;
}

inline std::vector<LocalClass> slice(Place v, const ConditionFamily& family, int m, const OrderingSpec& ordering) {
  if (v.is_infinite()) throw DomainError("slice is defined at finite places");
  std::vector<LocalClass> out;
  for (auto& f : family.members(v)) {
    if (ordering.exponent(f) == m) out.push_back(std::move(f));
  }
  return out;
}

namespace detail {

inline std::vector<i64> invariant_representatives(const ConditionFamily& family, const OrderingSpec& ordering) {
  return family.generic_representatives(ordering.modulus(), ordering.exceptional_places());
}

inline std::optional<int> minimal_ramified_exponent(const std::vector<LocalClass>& members, const OrderingSpec& ordering) {
  std::optional<int> best;
  for (const auto& f : members) {
    if (is_unramified(f)) continue;
    const int e = ordering.exponent(f);
    if (e > 0 && (!best || e < *best)) best = e;
  }
  return best;
}

}  // namespace detail

inline int a_invariant(const ConditionFamily& family, const OrderingSpec& ordering) {
  std::optional<int> a;
  for (i64 p : detail::invariant_representatives(family, ordering)) {
    const auto e = detail::minimal_ramified_exponent(family.members(Place::prime_unchecked(p)), ordering);
    if (e && (!a || *e < *a)) a = e;
  }
  if (!a) throw DomainError("no ramified classes allowed generically");
  return *a;
}

inline Rational b_invariant(const ConditionFamily& family, const OrderingSpec& ordering) {
  const int a = a_invariant(family, ordering);
  const auto reps = detail::invariant_representatives(family, ordering);
  Rational b = 0;
  for (i64 p : reps) {
    b += make_rational(static_cast<i64>(slice(Place::prime_unchecked(p), family, a, ordering).size()), family.n());
  }
  b /= static_cast<long>(reps.size());
  return b;
}

/// Order d of T' = <f_p(I_p) : f_p in generic slices L_p^{[a]}>, a subgroup of Z/n.
inline i64 minimal_inertia_subgroup(const ConditionFamily& family, const OrderingSpec& ordering) {
  const int a = a_invariant(family, ordering);
  i64 d = 1;
  for (i64 p : detail::invariant_representatives(family, ordering)) {
    for (const auto& f : slice(Place::prime_unchecked(p), family, a, ordering)) d = lcm(d, inertia_order(f));
  }
  return d;
}

/// Order of the subgroup generated by inertia images of all generic classes (any weight).
inline i64 generic_inertia_subgroup(const ConditionFamily& family, const OrderingSpec& ordering) {
  i64 d = 1;
  for (i64 p : detail::invariant_representatives(family, ordering)) {
    for (const auto& f : family.members(Place::prime_unchecked(p))) d = lcm(d, inertia_order(f));
  }
  return d;
}

inline std::string subgroup_name(i64 d, int n) {
  if (d == n) return "Z/" + std::to_string(n);
  if (d == 1) return "0";
  return "<" + std::to_string(n / d) + "> (order " + std::to_string(d) + ")";
}

/// True when nu_v(f) depends only on the subgroup generated by f|_{I_v} (and on f's Frobenius value).
inline bool constant_on_divisions(Place v, int n, const OrderingSpec& ordering) {
  for (const auto& f : local_group(v, n, Side::T).elements<Side::T>()) {
    const int e = ordering.exponent(f);
    for (i64 u = 2; u < n; ++u) {
      if (std::gcd<i64>(u, n) != 1) continue;
      const LocalClass g(v, n, {f.coords()[0], f.coords()[1] * u, f.coords()[2] * u});
      if (ordering.exponent(g) != e) return false;
    }
  }
  return true;
}

}  // namespace galcount
