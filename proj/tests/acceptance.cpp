// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status = number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "galcount/galcount.hpp"

using namespace galcount;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char time[32];
  std::snprintf(time, sizeof time, "%.1fs", secs);
  std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << title << ": " << o.detail << " (" << time << ")\n";
  std::cout.flush();
  if (!o.pass) ++failures;
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

// Random subgroup of H^1(Q_v, Z/n) generated by two random elements.
std::vector<GroupElement> random_subgroup(Place v, int n, std::mt19937_64& rng) {
  const FiniteAbelianGroup g(local_shape(v, n).moduli());
  const auto elems = g.elements();
  const int k = static_cast<int>(rng() % 3);
  std::vector<GroupElement> gens;
  for (int i = 0; i < k; ++i) gens.push_back(elems[rng() % elems.size()]);
  return Subgroup(g, gens).elements();
}

std::vector<std::string> builtin_names_for(int n) {
  std::vector<std::string> out{"full", "unramified", "tame", "real", "box:3", "box:2,5", "box:7,inf"};
  if (n == 2) out.push_back("d1mod4");
  for (i64 d : divisors(n)) out.push_back("div:" + std::to_string(d));
  return out;
}

Outcome poisson_exactness() {
  const auto disc = OrderingSpec::disc_regular();
  const std::vector<std::string> names{"full", "unramified", "real", "tame", "box:3", "box:5", "box:3,5", "box:2,3,5"};
  const auto start = std::chrono::steady_clock::now();
  int ok = 0;
  std::string bad;
  for (const auto& name : names) {
    const auto fam = builtin_family(name, 2);
    if (!is_periodic_eligible(fam)) {
      bad += " " + name + "(not periodic)";
      continue;
    }
    const auto special = special_primes(fam, disc);
    if (!std::all_of(special.begin(), special.end(), [](i64 p) { return p == 2 || p == 3 || p == 5; })) {
      bad += " " + name + "(S too large)";
      continue;
    }
    const auto r = poisson_check(fam, disc, 10000);
    if (r.ok()) {
      ++ok;
    } else {
      bad += " " + name + "(first mismatch at " + std::to_string(r.mismatches.front()) + ")";
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = ok >= 5 && bad.empty() && secs <= 300.0;
  return {pass, std::to_string(ok) + "/" + std::to_string(names.size()) + " families exact to N=10000" +
                    (bad.empty() ? "" : ";" + bad)};
}

Outcome greenberg_wiles() {
  std::mt19937_64 rng(20240601);
  const std::vector<Place> places{Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7), Place::infinity()};
  int fails = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    SelmerBox box{n, {}};
    for (Place v : places) {
      if (rng() % 3 == 0) continue;
      box.conditions[v] = random_subgroup(v, n, rng);
    }
    if (!greenberg_wiles_check(box).equal()) ++fails;
  }
  return {fails == 0, "100 random boxes, " + std::to_string(fails) + " failures"};
}

Outcome worked_example() {
  const auto disc = OrderingSpec::disc_regular();
  const auto fam = builtin_family("d1mod4", 2);
  const auto r = poisson_check(fam, disc, 2000);
  const auto grid = log_grid(1000, 1e7, 33);
  const auto sieve = d1mod4_sieve_counts(grid);
  const auto direct = counting_function(fam, disc, grid);
  const auto fit = fit_power_log(sieve);
  const int a = a_invariant(fam, disc);
  const Rational b = b_invariant(fam, disc);
  const bool fit_ok = fit.alpha >= 0.97 && fit.alpha <= 1.03 && fit.beta >= -0.9 && fit.beta <= -0.15;
  const bool pass = r.ok() && fit_ok && a == 1 && b == Rational(1, 2) && sieve.count == direct.count;
  return {pass, "Poisson to 2000 " + std::string(r.ok() ? "exact" : "MISMATCH") + ", alpha=" + fmt(fit.alpha) +
                    " beta=" + fmt(fit.beta) + ", a=" + std::to_string(a) + " b=" + to_string(b) +
                    ", enumerator " + (sieve.count == direct.count ? "=" : "!=") + " sieve to 1e7"};
}

Outcome asymptotics() {
  const auto disc = OrderingSpec::disc_regular();
  const auto g7 = log_grid(1000, 1e7, 33);
  const auto fit2 = fit_power_log(counting_function(builtin_family("full", 2), disc, g7));
  const i64 raw = counting_function(builtin_family("full", 2), disc, {1000000}).count[0];
  const i64 oracle = fundamental_discriminant_counts({1000000}).count[0];
  const auto fit3 = fit_power_log(counting_function(builtin_family("full", 3), disc, log_grid(1000, 1e8, 41)));
  const bool pass = std::abs(fit2.alpha - 1.0) <= 0.02 && raw == oracle && std::abs(fit3.alpha - 0.5) <= 0.02;
  return {pass, "n=2 alpha=" + fmt(fit2.alpha) + ", N(1e6)=" + std::to_string(raw) + " vs sieve " +
                    std::to_string(oracle) + ", n=3 alpha=" + fmt(fit3.alpha)};
}

Outcome cross_module() {
  const auto disc = OrderingSpec::disc_regular();
  int checked = 0;
  std::string bad;
  for (int n : {2, 3, 4}) {
    for (const auto& name : builtin_names_for(n)) {
      const auto fam = builtin_family(name, n);
      if (classify_family(fam) == FamilyClass::Neither) continue;
      const Singularity s = mb_main_term(fam, disc).singularity;
      Singularity expected;
      try {
        expected = {Rational(1, a_invariant(fam, disc)), b_invariant(fam, disc), false};
      } catch (const DomainError&) {
        expected = Singularity{};  // no generic ramification: 1/a = 0
      }
      ++checked;
      if (!(s == expected)) bad += " " + name + "/n=" + std::to_string(n);
    }
  }
  return {bad.empty(), std::to_string(checked) + " (family, n) pairs" + (bad.empty() ? "" : ", mismatches:" + bad)};
}

Outcome duality() {
  std::mt19937_64 rng(7);
  const PrimeSieve sieve(100);
  i64 groups = 0;
  std::string bad;
  for (i64 p : sieve.primes()) {
    for (int n = 2; n <= 6; ++n) {
      const Place v = Place::prime(p);
      const auto t = local_group(v, n, Side::T);
      const auto d = local_group(v, n, Side::Dual);
      const auto te = t.elements<Side::T>();
      const auto de = d.elements<Side::Dual>();
      bool perfect = t.order() == d.order();
      for (const auto& f : te) {
        bool nz = false;
        for (const auto& a : de) nz = nz || !local_tate_pair(f, a).is_zero();
        perfect = perfect && nz == !f.is_zero();
      }
      for (const auto& a : de) {
        bool nz = false;
        for (const auto& f : te) nz = nz || !local_tate_pair(f, a).is_zero();
        perfect = perfect && nz == !a.is_zero();
      }
      bool annihilators = true;
      std::vector<Subgroup> subs{t.unramified, Subgroup::trivial(t.carrier), Subgroup(t.carrier, t.carrier.elements())};
      for (const auto& x : t.carrier.elements()) subs.emplace_back(t.carrier, std::vector<GroupElement>{x});
      for (const auto& h : subs) {
        const Subgroup perp = annihilator(h);
        annihilators = annihilators && h.order() * perp.order() == t.order() && annihilator(perp) == h;
      }
      if (!perfect || !annihilators) bad += " p=" + std::to_string(p) + "/n=" + std::to_string(n);
      ++groups;
    }
  }

  const auto disc = OrderingSpec::disc_regular();
  std::vector<std::vector<EnumeratedCharacter>> chars;
  for (int n = 2; n <= 6; ++n) chars.push_back(enumerate_characters(builtin_family("full", n), disc, n == 2 ? 5000 : 200000));
  int recip_fail = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto& pool = chars[rng() % chars.size()];
    const auto& f = pool[rng() % pool.size()].character;
    const i64 num = (1 + static_cast<i64>(rng() % 100000)) * (rng() % 2 ? 1 : -1);
    const i64 den = 1 + static_cast<i64>(rng() % 1000);
    if (!reciprocity_defect(f, GlobalKummerClass::from_rational(f.n(), num, den)).is_zero()) ++recip_fail;
  }

  int dom_fail = 0;
  const std::vector<std::string> fams{"full", "tame", "unramified", "real"};
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const Place v = Place::prime(sieve.primes()[rng() % sieve.primes().size()]);
    const auto fam = trial % 7 == 0 && n == 2 ? builtin_family("d1mod4", 2) : builtin_family(fams[rng() % fams.size()], n);
    const auto ord = rng() % 2 ? OrderingSpec::disc_regular() : OrderingSpec::radical();
    const auto dual = local_group(v, n, Side::Dual).elements<Side::Dual>();
    const auto twisted = local_fourier(v, fam, ord, dual[rng() % dual.size()]).polynomial;
    const auto base = local_fourier(v, fam, ord, LocalKummerClass::zero(v, n)).polynomial;
    bool ok = twisted.size() <= base.size();
    for (std::size_t k = 0; ok && k < twisted.size(); ++k) {
      ok = base[k].is_rational() && base[k].rational_value() >= 0 &&
           std::abs(twisted[k].to_complex()) <= base[k].rational_value().get_d() + 1e-12;
    }
    if (!ok) ++dom_fail;
  }
  const bool pass = bad.empty() && recip_fail == 0 && dom_fail == 0;
  return {pass, std::to_string(groups) + " local groups" + (bad.empty() ? "" : " (bad:" + bad + ")") +
                    ", reciprocity failures " + std::to_string(recip_fail) + "/10000, domination failures " +
                    std::to_string(dom_fail) + "/1000"};
}

Outcome surjectivity() {
  const auto disc = OrderingSpec::disc_regular();
  const auto grid = log_grid(1000, 1e7, 33);
  bool mobius = true;
  for (int n : {2, 3, 4}) mobius = mobius && surjective_proportion(builtin_family("full", n), disc, grid).mobius_consistent();
  const auto r4 = surjective_proportion(builtin_family("full", 4), disc, grid);
  const i64 t = r4.minimal_inertia_order;
  const bool monotone = r4.ratio_nondecreasing();
  const double last = r4.points.back().ratio().get_d();
  const bool pass = mobius && monotone && t == 4;
  return {pass, std::string("Moebius ") + (mobius ? "exact" : "MISMATCH") + " on all grid points; n=4 T'=" +
                    subgroup_name(t, 4) + ", ratio " + (monotone ? "nondecreasing" : "not monotone") +
                    ", ratio(1e7)=" + fmt(last) + ", predicted limit " + to_string(r4.limit)};
}

void surjectivity_radical_note() {
  const auto rad = OrderingSpec::radical();
  const auto r = surjective_proportion(builtin_family("full", 4), rad, log_grid(100, 1e6, 21));
  std::cout << "[INFO] 7 radical ordering, n=4: T'=" << subgroup_name(r.minimal_inertia_order, 4) << ", ratio "
            << (r.ratio_nondecreasing() ? "nondecreasing" : "not monotone") << " from " << fmt(r.points.front().ratio().get_d())
            << " to " << fmt(r.points.back().ratio().get_d()) << " on [1e2, 1e6], predicted limit " << to_string(r.limit)
            << "\n";
}

}  // namespace

int main() {
  report(1, "Poisson exactness", poisson_exactness);
  report(2, "Greenberg-Wiles boxes", greenberg_wiles);
  report(3, "d = 1 mod 4 worked example", worked_example);
  report(4, "power-log asymptotics", asymptotics);
  report(5, "main-term singularity vs invariants", cross_module);
  report(6, "duality and reciprocity", duality);
  report(7, "surjectivity proportions", surjectivity);
  surjectivity_radical_note();
  return failures;
}
