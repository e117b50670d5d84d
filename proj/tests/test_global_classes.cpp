#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "galcount/global_classes.hpp"

using namespace galcount;

namespace {

bool squarefree(i64 m) {
  for (const auto& [p, e] : factorize(m)) {
    if (e > 1) return false;
  }
  return true;
}

bool fundamental_discriminant(i64 d) {
  if (d == 1 || d == 0) return false;
  if (mod(d, 4) == 1) return squarefree(d < 0 ? -d : d);
  if (mod(d, 4) != 0) return false;
  const i64 m = d / 4;
  return (mod(m, 4) == 2 || mod(m, 4) == 3) && squarefree(m < 0 ? -m : m);
}

// Number of primitive characters of conductor m with order dividing n, by brute force on unit torsion.
i64 primitive_count(i64 m, int n) {
  i64 total = 1;
  for (const auto& [q, e] : factorize(m)) {
    auto hom = [&](int k) {
      if (k == 0) return i64{1};
      const i64 mod_k = ipow(q, k);
      i64 c = 0;
      for (i64 u = 1; u < mod_k; ++u) {
        if (u % q != 0 && powmod(u, static_cast<u64>(n), mod_k) == 1) ++c;
      }
      return c;
    };
    total *= hom(e) - hom(e - 1);
  }
  return total;
}

i64 radical(i64 m) {
  i64 r = 1;
  for (const auto& [q, e] : factorize(m)) r *= q;
  return r;
}

std::vector<u64> weights(const ConditionFamily& fam, const OrderingSpec& ord, u64 x) {
  std::vector<u64> out;
  for (const auto& c : enumerate_characters(fam, ord, x)) out.push_back(c.weight);
  return out;
}

}  // namespace

TEST_CASE("small enumerations", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  const auto full2 = builtin_family("full", 2);
  const auto chars = enumerate_characters(full2, disc, 11);
  REQUIRE(chars.size() == 7);
  std::multiset<i64> discs;
  for (i64 d = -10; d <= 10; ++d) {
    if (fundamental_discriminant(d)) discs.insert(d < 0 ? -d : d);
  }
  discs.insert(1);
  std::multiset<i64> got;
  for (const auto& c : chars) got.insert(static_cast<i64>(c.weight));
  CHECK(got == discs);
  CHECK(chars.front().character.is_trivial());

  CHECK(weights(builtin_family("unramified", 2), disc, 100000) == std::vector<u64>{1});
  CHECK(weights(builtin_family("unramified", 5), disc, 100000) == std::vector<u64>{1});

  const auto c3 = enumerate_characters(builtin_family("full", 3), disc, 82);
  REQUIRE(c3.size() == 5);
  CHECK(c3[1].weight == 49);
  CHECK(c3[1].modulus == 7);
  CHECK(c3[2].modulus == 7);
  CHECK(c3[3].weight == 81);
  CHECK(c3[3].modulus == 9);
  CHECK(c3[4].modulus == 9);
}

TEST_CASE("enumeration matches conductor oracle", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  const auto rad = OrderingSpec::radical();
  // disc weight is m for n = 2 and m^2 for n = 3 (conductor-discriminant formula)
  for (int n : {2, 3}) {
    const u64 x = n == 2 ? 5000 : 250000;
    i64 oracle = 0;
    for (i64 m = 1; static_cast<u64>(ipow(m, n - 1)) < x; ++m) oracle += primitive_count(m, n);
    CHECK(static_cast<i64>(enumerate_characters(builtin_family("full", n), disc, x).size()) == oracle);
  }
  for (int n : {2, 3, 4, 5, 6}) {
    const u64 x = 300;
    i64 oracle = 0;
    for (i64 m = 1; m < 64 * static_cast<i64>(x); ++m) {
      if (static_cast<u64>(radical(m)) < x) oracle += primitive_count(m, n);
    }
    CHECK(static_cast<i64>(enumerate_characters(builtin_family("full", n), rad, x).size()) == oracle);
  }
}

TEST_CASE("characters are homomorphisms and localize consistently", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4, 6}) {
    for (const auto& e : enumerate_characters(builtin_family("full", n), disc, n == 2 ? 400 : 20000)) {
      const auto& f = e.character;
      const i64 m = f.modulus();
      CHECK(e.weight == f.weight(disc));
      CHECK(m == e.modulus);
      for (i64 a = 1; a < 60; ++a) {
        if (std::gcd(a, m) != 1) continue;
        CHECK(f.value(a + m) == f.value(a));
        for (i64 b = 1; b < 20; ++b) {
          if (std::gcd(b, m) == 1) CHECK(f.value(a * b) == mod(f.value(a) + f.value(b), n));
        }
        if (is_prime(a)) {
          const auto loc = f.restrict_to(Place::prime(a));
          CHECK(is_unramified(loc));
          CHECK(loc.coords()[0] == f.value(a));
        }
      }
      const auto inf = f.restrict_to(Place::infinity());
      CHECK(inf.coords()[0] * (n / std::gcd(n, 2)) == f.value(-1));
      // weight multiplicativity
      u64 w = 1;
      for (i64 q : f.support()) w *= static_cast<u64>(ipow(q, disc.exponent(f.restrict_to(Place::prime(q)))));
      CHECK(w == e.weight);
    }
  }
}

TEST_CASE("restriction examples", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  const auto chars = enumerate_characters(builtin_family("full", 2), disc, 11);
  auto with_modulus = [&](i64 m) {
    for (const auto& c : chars) {
      if (c.modulus == m) return c.character;
    }
    FAIL("missing modulus");
    return GlobalCharacter::trivial(2);
  };
  const auto chi4 = with_modulus(4);
  const auto r2 = chi4.restrict_to(Place::prime(2));
  CHECK_FALSE(is_unramified(r2));
  CHECK(conductor_exponent(r2) == 2);
  CHECK(chi4.value(-1) == 1);
  const auto chi5 = with_modulus(5);
  CHECK(conductor_exponent(chi5.restrict_to(Place::prime(5))) == 1);
  CHECK(chi5.value(-1) == 0);
  CHECK(GlobalCharacter::trivial(3).restrict_to(Place::prime(7)).is_zero());
  CHECK(GlobalCharacter::trivial(3).restrict_to(Place::infinity()).is_zero());
}

TEST_CASE("value tables and serialization", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4}) {
    for (const auto& e : enumerate_characters(builtin_family("full", n), disc, 3000)) {
      const std::string line = e.character.serialize(disc);
      CHECK(GlobalCharacter::parse(n, line, disc) == e.character);
      CHECK(GlobalCharacter::from_value_table(n, e.modulus, e.values) == e.character);
    }
  }
  // chi_{-4} presented modulo 12: generators 7 (the -1 of the 2-part) and 5 (primitive root 2 of the 3-part)
  CHECK(unit_generators(12) == std::vector<std::pair<i64, i64>>{{2, 7}, {3, 5}});
  const auto f = GlobalCharacter::from_value_table(2, 12, {1, 0});
  CHECK(f.modulus() == 4);
  CHECK(f.serialize(disc) == "4,4,1");
  CHECK(GlobalCharacter::trivial(2).serialize(disc) == "1,1,");
  CHECK_THROWS_AS(GlobalCharacter::from_value_table(2, 12, {1}), DomainError);
  CHECK_THROWS_AS(GlobalCharacter::from_value_table(3, 5, {1}), DomainError);  // no cubic character mod 5
}

TEST_CASE("kernel of localization is trivial at desk scale", "[global-classes]") {
  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4}) {
    const auto chars = enumerate_characters(builtin_family("full", n), disc, n == 2 ? 300 : 3000);
    i64 max_m = 1;
    for (const auto& c : chars) max_m = std::max(max_m, c.modulus);
    std::vector<i64> probes;
    for (i64 p = 2; p <= 4 * max_m; ++p) {
      if (is_prime(p)) probes.push_back(p);
    }
    std::set<std::vector<GroupElement>> signatures;
    for (const auto& c : chars) {
      std::vector<GroupElement> sig;
      for (i64 p : probes) sig.push_back(c.character.restrict_to(Place::prime(p)).coords());
      CHECK(signatures.insert(sig).second);
    }
  }
}

TEST_CASE("surjectivity and Moebius inversion", "[global-classes]") {
  CHECK_FALSE(is_surjective(GlobalCharacter::trivial(2)));
  CHECK(surjective_count({{1, 1}, {2, 7}}, 2) == 6);
  CHECK(surjective_count({{1, 1}, {2, 5}, {4, 9}}, 4) == 4);
  CHECK(surjective_count({{1, 3}, {2, 3}, {3, 3}, {6, 3}}, 6) == 0);
  CHECK_THROWS_AS(surjective_count({{1, 1}}, 2), DomainError);

  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4, 6}) {
    std::map<i64, i64> counts;
    for (i64 d : divisors(n)) counts[d] = 0;
    i64 direct = 0;
    for_each_character(builtin_family("full", n), disc, 100000, [&](const CharacterView& v) {
      for (auto& [d, c] : counts) c += d % v.image_order == 0 ? 1 : 0;
      direct += v.materialize().image_order() == n ? 1 : 0;
      CHECK(v.image_order == v.materialize().image_order());
    });
    CHECK(surjective_count(counts, n) == direct);
  }
  // an order-2 character into Z/4 is not surjective
  const auto f = GlobalCharacter(4, {{5, 2, 0}});
  CHECK(f.image_order() == 2);
  CHECK_FALSE(is_surjective(f));
  CHECK(is_surjective(GlobalCharacter(4, {{5, 1, 0}})));
}

TEST_CASE("Kummer classes and reciprocity", "[global-classes]") {
  const auto a = GlobalKummerClass::from_rational(2, -12);
  CHECK(a.sign() == -1);
  CHECK(a.exponents() == std::map<i64, int>{{3, 1}});
  CHECK(a.to_string() == "-3");
  CHECK(GlobalKummerClass::from_rational(3, -8).is_identity());
  CHECK(GlobalKummerClass::from_rational(4, 1, 8).to_string() == "2");

  const auto disc = OrderingSpec::disc_regular();
  const auto chars2 = enumerate_characters(builtin_family("full", 2), disc, 11);
  for (const auto& c : chars2) {
    CHECK(reciprocity_defect(c.character, GlobalKummerClass::from_rational(2, -1)).is_zero());
    CHECK(reciprocity_defect(c.character, GlobalKummerClass::from_rational(2, 5)).is_zero());
    CHECK(reciprocity_defect(GlobalCharacter::trivial(2), GlobalKummerClass::from_rational(2, 35)).is_zero());
  }

  std::mt19937_64 rng(5);
  for (int n : {2, 3, 4}) {
    const auto chars = enumerate_characters(builtin_family("full", n), disc, 20000);
    for (int trial = 0; trial < 300; ++trial) {
      const auto& f = chars[rng() % chars.size()].character;
      const i64 num = (1 + static_cast<i64>(rng() % 2000)) * (rng() % 2 ? 1 : -1);
      const auto g = GlobalKummerClass::from_rational(n, num);
      CHECK(reciprocity_defect(f, g).is_zero());
    }
  }
}
