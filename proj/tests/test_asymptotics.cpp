#include <catch_amalgamated.hpp>

#include "galcount/asymptotics.hpp"
#include "galcount/poisson.hpp"

using namespace galcount;

TEST_CASE("log grids", "[asymptotics-lab]") {
  const auto g = log_grid(10, 1e4, 4);
  CHECK(g == std::vector<u64>{10, 100, 1000, 10000});
  CHECK(log_grid(2, 3, 10) == std::vector<u64>{2, 3});
  CHECK_THROWS_AS(log_grid(1, 10, 3), DomainError);
}

TEST_CASE("counting functions", "[asymptotics-lab]") {
  const auto disc = OrderingSpec::disc_regular();
  CHECK(counting_function(builtin_family("full", 2), disc, {11}).count == std::vector<i64>{7});
  CHECK(counting_function(builtin_family("unramified", 3), disc, {2, 100, 100000}).count == std::vector<i64>{1, 1, 1});

  // 21: 7 is a square mod 3 but 3 is not a square mod 7
  const PrimeSieve sieve(1000);
  CHECK_FALSE(d1mod4_condition(21, sieve));
  CHECK_FALSE(d1mod4_condition(-15, sieve));
  CHECK_FALSE(d1mod4_condition(-7, sieve));
  CHECK(d1mod4_condition(5, sieve));
  CHECK(d1mod4_condition(145, sieve));
  CHECK(d1mod4_condition(1, sieve));
  const auto grid = log_grid(10, 1e5, 13);
  CHECK(counting_function(builtin_family("d1mod4", 2), disc, grid).count == d1mod4_sieve_counts(grid).count);

  const auto big = log_grid(100, 1e6, 17);
  const auto s = counting_function(builtin_family("full", 2), disc, big);
  CHECK(s.count == fundamental_discriminant_counts(big).count);
  CHECK(std::is_sorted(s.count.begin(), s.count.end()));
  CHECK(s.to_csv().rfind("X,N\n100,", 0) == 0);
  CHECK_THROWS_AS(counting_function(builtin_family("full", 2), disc, {100, 10}), DomainError);
  CHECK_THROWS_AS(counting_function(builtin_family("full", 2), disc, {100}, 50), ResourceCapError);
}

TEST_CASE("power-log fits", "[asymptotics-lab]") {
  const auto disc = OrderingSpec::disc_regular();
  const auto f = fit_power_log(fundamental_discriminant_counts(log_grid(1000, 1e6, 25)));
  CHECK(std::abs(f.alpha - 1.0) < 0.02);
  CHECK(std::abs(f.beta) < 0.3);
  CHECK(f.points == 15);

  // synthetic exact power-log data is recovered
  CountSample synth;
  synth.x = log_grid(100, 1e8, 20);
  for (u64 x : synth.x) {
    const double lx = std::log(static_cast<double>(x));
    synth.count.push_back(std::llround(3.0 * std::pow(static_cast<double>(x), 0.5) / std::sqrt(lx) * 1000));
  }
  const auto g = fit_power_log(synth);
  CHECK(std::abs(g.alpha - 0.5) < 1e-3);
  CHECK(std::abs(g.beta + 0.5) < 1e-2);

  CountSample flat;
  flat.x = log_grid(10, 1e5, 10);
  flat.count.assign(flat.x.size(), 1);
  CHECK_THROWS_AS(fit_power_log(flat), DomainError);
  CountSample narrow;
  narrow.x = log_grid(10, 1000, 10);
  narrow.count.assign(narrow.x.size(), 1);
  CHECK_THROWS_AS(fit_power_log(narrow), DomainError);
  CountSample few;
  few.x = log_grid(10, 1e6, 5);
  few.count = {1, 2, 3, 4, 5};
  CHECK_THROWS_AS(fit_power_log(few), DomainError);
}

TEST_CASE("surjective proportions", "[asymptotics-lab]") {
  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4, 6}) {
    const auto r = surjective_proportion(builtin_family("full", n), disc, log_grid(10, 1e5, 9));
    CHECK(r.mobius_consistent());
  }
  const auto r2 = surjective_proportion(builtin_family("full", 2), disc, {1000});
  CHECK(r2.points[0].total - r2.points[0].surjective == 1);
  CHECK(r2.limit == LimitClass::One);
  const auto r3 = surjective_proportion(builtin_family("full", 3), disc, {1000000});
  CHECK(r3.points[0].ratio() > Rational(95, 100));
  CHECK(r3.limit == LimitClass::One);
  CHECK(predicted_limit(builtin_family("full", 4), disc) == LimitClass::Positive);
  CHECK(predicted_limit(builtin_family("full", 4), OrderingSpec::radical()) == LimitClass::One);
  CHECK(predicted_limit(builtin_family("div:2", 4), disc) == LimitClass::Undetermined);
}

TEST_CASE("predicted exponents agree with the main term", "[asymptotics-lab]") {
  const auto disc = OrderingSpec::disc_regular();
  for (int n : {2, 3, 4}) {
    for (const char* name : {"full", "tame", "real"}) {
      const auto fam = builtin_family(name, n);
      const auto s = mb_main_term(fam, disc).singularity;
      CHECK(s == Singularity{Rational(1, a_invariant(fam, disc)), b_invariant(fam, disc), false});
    }
  }
}
