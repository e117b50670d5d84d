#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "galcount/dirichlet_euler.hpp"

using namespace galcount;

namespace {

EulerFactor poly(std::initializer_list<long> cs, int field = 1) {
  EulerFactor f;
  for (long c : cs) f.emplace_back(field, Rational(c));
  return f;
}

// prod_p (1 + x) over all primes: the squarefree indicator.
EulerProductSpec squarefree_spec() {
  EulerProductSpec s(1, 1);
  s.class_factors[0] = poly({1, 1});
  return s;
}

}  // namespace

TEST_CASE("expansion of simple products", "[dirichlet-euler]") {
  const auto sq = expand(squarefree_spec(), 10);
  const std::vector<long> expected{1, 1, 1, 0, 1, 1, 1, 0, 0, 1};
  for (i64 k = 1; k <= 10; ++k) CHECK(sq[k] == CyclotomicScalar(1, Rational(expected[k - 1])));

  // 1 + x at p = 1 mod 4, p > 4, and x at p = 5 (zero constant term): multiples of 5 only
  EulerProductSpec s(1, 4);
  s.class_factors[1] = poly({1, 1});
  s.exceptional[5] = poly({0, 1});
  const auto a = expand(s, 100);
  std::vector<i64> support;
  for (i64 k = 1; k <= 100; ++k) {
    if (!a[k].is_zero()) support.push_back(k);
  }
  CHECK(support == std::vector<i64>{5, 65, 85});

  EulerProductSpec p1mod4(1, 4);
  p1mod4.class_factors[1] = poly({1, 1});
  std::vector<i64> primes;
  for (i64 k = 2; k <= 30; ++k) {
    if (!expand(p1mod4, 30)[k].is_zero() && is_prime(k)) primes.push_back(k);
  }
  CHECK(primes == std::vector<i64>{5, 13, 17, 29});

  const auto one = expand(EulerProductSpec(1, 1), 5);
  CHECK(one.dump() == "1,1\n");
  CHECK_THROWS_AS(expand(squarefree_spec(), 100, 50), ResourceCapError);
}

TEST_CASE("products of specs multiply series", "[dirichlet-euler]") {
  EulerProductSpec a(3, 3);
  a.class_factors[1] = {CyclotomicScalar(3, 1), CyclotomicScalar::root_of_unity(3, 1)};
  a.exceptional[3] = {CyclotomicScalar(3, 1), CyclotomicScalar(3, 2)};
  EulerProductSpec b(3, 3);
  b.class_factors[2] = {CyclotomicScalar(3, 1), CyclotomicScalar(3, 0), CyclotomicScalar(3, 1)};
  b.exceptional[7] = {CyclotomicScalar(3, 0), CyclotomicScalar(3, 1)};
  const i64 n = 400;
  CHECK(expand(a * b, n) == expand(a, n).convolve(expand(b, n)));
  CHECK_THROWS_AS(a * squarefree_spec(), DomainError);
}

TEST_CASE("singularity from class tables", "[dirichlet-euler]") {
  CHECK(singularity(squarefree_spec()) == Singularity{1, 1, false});
  EulerProductSpec half(1, 4);
  half.class_factors[1] = poly({1, 1});
  CHECK(singularity(half) == Singularity{1, Rational(1, 2), false});
  EulerProductSpec square(1, 1);
  square.class_factors[0] = poly({1, 0, 1});
  CHECK(singularity(square) == Singularity{Rational(1, 2), 1, false});
  CHECK(singularity(EulerProductSpec(1, 1)) == Singularity{});
  EulerProductSpec neg(1, 1);
  neg.class_factors[0] = poly({1, -1});
  CHECK_THROWS_AS(singularity(neg), DomainError);
  EulerProductSpec generic(2, 1);
  generic.generic_factor = [](i64) { return constant_factor(2); };
  CHECK_THROWS_AS(singularity(generic), DomainError);
  generic.majorant[0] = poly({1, 1}, 2);
  CHECK(singularity(generic, true) == Singularity{1, 1, true});
}

TEST_CASE("numerical evaluation", "[dirichlet-euler]") {
  // prod (1 + p^-2) = zeta(2) / zeta(4) = 15 / pi^2
  const auto v = evaluate(squarefree_spec(), 2.0, 1000000);
  const double exact = 15.0 / (std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(v.value.real() - exact) < 1e-6);
  CHECK(std::abs(v.value.real() - exact) <= v.error_bound);
  CHECK(v.error_bound < 1e-5);
  CHECK_THROWS_AS(evaluate(squarefree_spec(), 1.0, 1000), DomainError);
  CHECK(prime_tail_bound(2.0, 100.0) > 0.0);

  // conditional partial sums of prod (1 - p^-s) = 1/zeta(s) at s = 1 approach 0 slowly
  EulerProductSpec mu(1, 1);
  mu.class_factors[0] = poly({1, -1});
  const auto sums = evaluate_conditional(mu, 1.0, {10, 1000, 100000});
  REQUIRE(sums.size() == 3);
  CHECK(sums[0].first == 10);
  CHECK(std::abs(sums[2].second) < std::abs(sums[0].second));
  CHECK(std::abs(sums[2].second) < 1e-2);
}
