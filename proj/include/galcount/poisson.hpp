#pragma once

// Local Fourier transforms of w(f) = N(inv f)^{-s} 1_L(f), the dual Euler
// products w^(g) for g in H^1(Q, mu_n) = Q^*/(Q^*)^n, and exact checks of
//   sum_f w(f) = (|H^0(Q,T)| / |H^0(Q,T*)|) sum_g w^(g)
// coefficient by coefficient, together with the Greenberg-Wiles box identity.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "galcount/dirichlet_euler.hpp"
#include "galcount/global_classes.hpp"
#include "galcount/local_cohomology.hpp"
#include "galcount/local_conditions.hpp"

namespace galcount {

struct LocalFourierFactor {
  Place place = Place::infinity();
  EulerFactor polynomial;
};

/// (1/|H^0(Q_v,T)|) sum_{f in L_v} zeta_n^{n <f, g_v>} x^{nu_v(f)}, with |H^0(Q_v, Z/n)| = n.
inline LocalFourierFactor local_fourier(const std::vector<LocalClass>& members, const OrderingSpec& ordering,
                                        const LocalKummerClass& g) {
  const int n = g.n();
  EulerFactor poly{CyclotomicScalar(n)};
  const Rational weight(1, static_cast<unsigned long>(local_h0_order(g.place(), n)));
  for (const auto& f : members) {
    const std::size_t e = static_cast<std::size_t>(ordering.exponent(f));
    if (poly.size() <= e) poly.resize(e + 1, CyclotomicScalar(n));
    poly[e] += CyclotomicScalar::root_of_unity(n, local_tate_pair(f, g).residue_mod(n)) * weight;
  }
  trim_factor(poly);
  return {g.place(), std::move(poly)};
}

inline LocalFourierFactor local_fourier(Place v, const ConditionFamily& family, const OrderingSpec& ordering,
                                        const LocalKummerClass& g) {
  if (g.place() != v || g.n() != family.n()) throw DomainError("local_fourier: class does not match place or n");
  return local_fourier(family.members(v), ordering, g);
}

/// The finite places where dual series need explicit factors.
inline std::set<i64> special_primes(const ConditionFamily& family, const OrderingSpec& ordering) {
  std::set<i64> out = ordering.exceptional_places();
  for (Place v : family.irregular_places()) {
    if (v.is_finite()) out.insert(v.prime());
  }
  for (const auto& [p, e] : factorize(family.combined_modulus(ordering))) out.insert(p);
  return out;
}

/// All classes +-prod_{p in S} p^{e_p}; the sign is present only for even n.
inline std::vector<GlobalKummerClass> kummer_classes_supported_on(const std::set<i64>& primes, int n) {
  std::vector<GlobalKummerClass> out{GlobalKummerClass::identity(n)};
  for (i64 p : primes) {
    std::vector<GlobalKummerClass> next;
    for (const auto& a : out) {
      for (int e = 0; e < n; ++e) {
        auto ex = a.exponents();
        if (e > 0) ex[p] = e;
        next.emplace_back(n, a.sign(), ex);
      }
    }
    out = std::move(next);
  }
  if (n % 2 == 0) {
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i) out.emplace_back(n, -1, out[i].exponents());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// H^1(Q, mu_n) intersected with Y_S-perp: classes with valuation 0 mod n outside S.
/// Places outside S must carry H^1_ur-periodic conditions.
inline std::vector<GlobalKummerClass> dual_support(const ConditionFamily& family, const std::set<Place>& s) {
  if (!is_periodic_eligible(family)) throw DomainError("dual_support: family is not periodic-eligible");
  for (Place v : family.irregular_places()) {
    if (s.count(v) || v.is_infinite()) continue;
    if (!shape_flags(family.members(v), v, family.n()).unramified_closed) {
      throw DomainError("dual_support: L_v at " + v.to_string() + " is not H^1_ur-periodic and " + v.to_string() +
                        " is outside S");
    }
  }
  std::set<i64> primes;
  for (Place v : s) {
    if (v.is_finite()) primes.insert(v.prime());
  }
  return kummer_classes_supported_on(primes, family.n());
}

/// Class table of w^(0) at generic primes: one representative per unit class mod lcm(rule, ordering, n).
inline std::map<i64, EulerFactor> trivial_dual_class_table(const ConditionFamily& family, const OrderingSpec& ordering) {
  const i64 m = family.combined_modulus(ordering);
  std::map<i64, EulerFactor> table;
  for (i64 p : family.generic_representatives(ordering.modulus(), ordering.exceptional_places())) {
    const Place v = Place::prime_unchecked(p);
    auto f = local_fourier(v, family, ordering, LocalKummerClass::zero(v, family.n())).polynomial;
    if (!is_one_factor(f)) table[mod(p, m)] = std::move(f);
  }
  return table;
}

/// w^(g) as an Euler product; the real place is folded into the prefactor.
inline EulerProductSpec dual_series(const ConditionFamily& family, const OrderingSpec& ordering,
                                    const GlobalKummerClass& g,
                                    const std::map<i64, EulerFactor>* trivial_table = nullptr) {
  const int n = family.n();
  if (g.n() != n) throw DomainError("dual_series: class and family have different n");
  const i64 m = family.combined_modulus(ordering);
  EulerProductSpec spec(n, m);
  spec.majorant = trivial_table ? *trivial_table : trivial_dual_class_table(family, ordering);

  std::set<i64> places = special_primes(family, ordering);
  for (const auto& [p, e] : g.exponents()) places.insert(p);
  for (i64 p : places) {
    const Place v = Place::prime(p);
    spec.exceptional[p] = local_fourier(v, family, ordering, g.restrict_to(v)).polynomial;
  }
  const auto inf = local_fourier(Place::infinity(), family, ordering, g.restrict_to(Place::infinity())).polynomial;
  spec.prefactor = inf[0];

  if (g.is_identity()) {
    spec.class_factors = spec.majorant;
  } else {
    // Generic p: g_p is a unit class; members of L_p depend only on p.
    spec.generic_factor = [&family, &ordering, g](i64 p) {
      const Place v = Place::prime_unchecked(p);
      return local_fourier(v, family, ordering, g.restrict_to(v)).polynomial;
    };
  }
  return spec;
}

struct MainTerm {
  EulerProductSpec spec;
  Singularity singularity;
};

inline MainTerm mb_main_term(const ConditionFamily& family, const OrderingSpec& ordering) {
  EulerProductSpec spec = dual_series(family, ordering, GlobalKummerClass::identity(family.n()));
  const Singularity s = singularity(spec);
  return {std::move(spec), s};
}

/// |H^0(Q, Z/n)| / |H^0(Q, mu_n)| = n / gcd(n, 2).
inline Rational global_scalar(int n) { return Rational(n / std::gcd(n, 2)); }

struct PoissonReport {
  int n = 2;
  i64 truncation = 0;
  std::vector<CyclotomicScalar> direct;
  std::vector<CyclotomicScalar> dual;
  Rational scalar = 1;
  std::size_t dual_terms = 0;
  std::vector<i64> mismatches;

  bool ok() const { return mismatches.empty(); }

  /// "k,direct,dual,match" for every k where either side is nonzero.
  std::string table() const {
    std::string out = "k,direct,dual,match\n";
    for (i64 k = 1; k <= truncation; ++k) {
      const auto& a = direct[static_cast<std::size_t>(k)];
      const auto& b = dual[static_cast<std::size_t>(k)];
      if (a.is_zero() && b.is_zero()) continue;
      out += std::to_string(k) + "," + a.to_string() + "," + b.to_string() + "," + (a == b ? "1" : "0") + "\n";
    }
    return out;
  }
};

/// Dirichlet coefficients of sum_{f in H^1_L} N(inv f)^{-s} up to N.
inline std::vector<i64> direct_coefficients(const ConditionFamily& family, const OrderingSpec& ordering, i64 n,
                                            i64 max_primes = 0) {
  std::vector<i64> counts(static_cast<std::size_t>(n) + 1, 0);
  for_each_character(
      family, ordering, static_cast<u64>(n) + 1,
      [&](const CharacterView& v) { ++counts[static_cast<std::size_t>(v.weight)]; }, max_primes);
  return counts;
}

/// The dual classes that can contribute to coefficients <= N.
///
/// Periodic families: the finite set supported on the special places.
/// Non-periodic families (H^1_ur inside L_p generically): every g = s * t with
/// s supported on the special places and t supported on primes outside them;
/// the factor at each p | t is divisible by x, so only rad(t) <= N matters.
inline std::vector<GlobalKummerClass> contributing_dual_classes(const ConditionFamily& family,
                                                                const OrderingSpec& ordering, i64 n) {
  const FamilyClass cls = classify_family(family);
  if (cls == FamilyClass::Neither) throw DomainError("poisson_check: family is neither periodic- nor nonperiodic-eligible");
  const std::set<i64> special = special_primes(family, ordering);
  const auto base = kummer_classes_supported_on(special, family.n());
  if (cls == FamilyClass::Both) return base;

  std::vector<GlobalKummerClass> out;
  const PrimeSieve sieve(std::max<i64>(n, 2));
  std::vector<i64> primes;
  for (i64 p : sieve.primes()) {
    if (!special.count(p)) primes.push_back(p);
  }
  const int nn = family.n();
  // depth-first over squarefree supports with product <= N, each prime with exponent 1..n-1
  std::vector<std::pair<i64, int>> support;
  std::function<void(std::size_t, i64)> walk = [&](std::size_t start, i64 rad) {
    for (const auto& b : base) {
      auto ex = b.exponents();
      for (const auto& [p, e] : support) ex[p] = e;
      out.emplace_back(nn, b.sign(), ex);
    }
    for (std::size_t i = start; i < primes.size() && rad * primes[i] <= n; ++i) {
      for (int e = 1; e < nn; ++e) {
        support.emplace_back(primes[i], e);
        walk(i + 1, rad * primes[i]);
        support.pop_back();
      }
    }
  };
  walk(0, 1);
  return out;
}

inline PoissonReport poisson_check(const ConditionFamily& family, const OrderingSpec& ordering, i64 n,
                                   i64 cap = kDefaultSeriesCap, i64 max_primes = 0) {
  if (n > cap) throw ResourceCapError("poisson_check: N exceeds the cap");
  const int nn = family.n();
  PoissonReport r;
  r.n = nn;
  r.truncation = n;
  r.scalar = global_scalar(nn);

  const auto counts = direct_coefficients(family, ordering, n, max_primes);
  r.direct.assign(static_cast<std::size_t>(n) + 1, CyclotomicScalar(nn));
  for (i64 k = 1; k <= n; ++k) r.direct[static_cast<std::size_t>(k)] = CyclotomicScalar(nn, Rational(counts[k]));

  const auto table = trivial_dual_class_table(family, ordering);
  CoefficientSeries sum(nn, n);
  const auto classes = contributing_dual_classes(family, ordering, n);
  r.dual_terms = classes.size();
  for (const auto& g : classes) sum += expand(dual_series(family, ordering, g, &table), n, cap);
  r.dual.assign(static_cast<std::size_t>(n) + 1, CyclotomicScalar(nn));
  for (i64 k = 1; k <= n; ++k) {
    r.dual[static_cast<std::size_t>(k)] = sum[k] * r.scalar;
    if (r.dual[static_cast<std::size_t>(k)] != r.direct[static_cast<std::size_t>(k)]) r.mismatches.push_back(k);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Greenberg-Wiles

/// Subgroup conditions L_v at finitely many places; H^1_ur at every other finite
/// place and {0} at the real place unless listed.
struct SelmerBox {
  int n = 2;
  std::map<Place, std::vector<GroupElement>> conditions;
};

struct GreenbergWilesReport {
  i64 selmer = 0;
  i64 dual_selmer = 0;
  Rational lhs = 0;
  Rational rhs = 0;
  bool equal() const { return lhs == rhs; }
};

inline GreenbergWilesReport greenberg_wiles_check(const SelmerBox& box) {
  const int n = box.n;
  std::map<Place, Subgroup> local;
  std::map<Place, LocalSubset> sets;
  for (const auto& [v, elems] : box.conditions) {
    const FiniteAbelianGroup g(local_shape(v, n).moduli());
    if (!is_subgroup(g, elems)) throw DomainError("greenberg_wiles_check: condition at " + v.to_string() + " is not a subgroup");
    local.emplace(v, Subgroup(g, elems));
    sets.emplace(v, LocalSubset::explicit_set(elems));
  }
  if (!sets.count(Place::infinity())) {
    sets.emplace(Place::infinity(), LocalSubset::zero());
    const FiniteAbelianGroup g(local_shape(Place::infinity(), n).moduli());
    local.emplace(Place::infinity(), Subgroup::trivial(g));
  }

  GreenbergWilesReport r;
  const ConditionFamily family(n, FrobenianRule{1, {}, LocalSubset::unramified()}, sets, "box");
  for_each_character(family, OrderingSpec::radical(), ~u64{0} >> 1, [&](const CharacterView&) { ++r.selmer; });

  std::set<i64> primes;
  for (const auto& [v, s] : local) {
    if (v.is_finite()) primes.insert(v.prime());
  }
  for (const auto& a : kummer_classes_supported_on(primes, n)) {
    bool ok = true;
    for (const auto& [v, s] : local) {
      const Subgroup perp = annihilator(s);
      ok = ok && perp.contains(a.restrict_to(v).coords());
    }
    // unlisted finite places: a has valuation 0 there, which is exactly ann(H^1_ur)
    r.dual_selmer += ok ? 1 : 0;
  }

  r.lhs = Rational(r.selmer) / Rational(r.dual_selmer);
  r.rhs = global_scalar(n);
  for (const auto& [v, s] : local) r.rhs *= Rational(s.order()) / Rational(local_h0_order(v, n));
  r.rhs.canonicalize();
  r.lhs.canonicalize();
  return r;
}

}  // namespace galcount
