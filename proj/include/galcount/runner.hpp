#pragma once

// Executes a RunConfig and writes its report. Exit codes: 0 success,
// 1 usage, 2 configuration, 3 identity mismatch, 4 resource cap.

#include <ostream>
#include <string>

#include "galcount/asymptotics.hpp"
#include "galcount/config.hpp"
#include "galcount/poisson.hpp"

namespace galcount {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitMismatch = 3, kExitResource = 4 };

namespace detail {

inline void header(std::ostream& os, const RunConfig& c, const ConditionFamily& fam) {
  os << "command=" << to_string(c.command) << "\n";
  os << "n=" << c.n << "\n";
  os << "family=" << fam.name() << "\n";
  os << "ordering=" << c.ordering.name() << "\n";
}

inline SelmerBox build_box(const RunConfig& c) {
  SelmerBox box{c.n, {}};
  for (const auto& [v, text] : c.box) {
    std::vector<GroupElement> elems;
    for (const auto& f : LocalSubset::parse(text).instantiate(v, c.n)) elems.push_back(f.coords());
    box.conditions.emplace(v, std::move(elems));
  }
  return box;
}

inline void write_invariants(std::ostream& os, const ConditionFamily& fam, const OrderingSpec& ord) {
  const FamilyClass cls = classify_family(fam);
  os << "class=" << to_string(cls) << "\n";
  bool ramified = true;
  try {
    (void)a_invariant(fam, ord);
  } catch (const DomainError&) {
    ramified = false;
  }
  if (ramified) {
    const int a = a_invariant(fam, ord);
    os << "a=" << a << "\n";
    os << "b=" << to_string(b_invariant(fam, ord)) << "\n";
    os << "T'=" << subgroup_name(minimal_inertia_subgroup(fam, ord), fam.n()) << "\n";
    os << "inertia=" << subgroup_name(generic_inertia_subgroup(fam, ord), fam.n()) << "\n";
    os << "limit=" << to_string(predicted_limit(fam, ord)) << "\n";
  } else {
    os << "a=none\nb=none\nT'=0\ninertia=0\nlimit=undetermined\n";
  }
  if (cls != FamilyClass::Neither) {
    const auto s = mb_main_term(fam, ord).singularity;
    os << "abscissa=" << to_string(s.abscissa) << "\n";
    os << "pole_order=" << to_string(s.order) << "\n";
  }
}

inline int write_poisson(std::ostream& os, const PoissonReport& r) {
  os << "N=" << r.truncation << "\n";
  os << "scalar=" << to_string(r.scalar) << "\n";
  os << "dual_classes=" << r.dual_terms << "\n";
  os << "mismatches=" << r.mismatches.size() << "\n";
  os << r.table();
  return r.ok() ? kExitOk : kExitMismatch;
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& os) {
  const ConditionFamily fam = c.command == Command::ExampleD1mod4 ? builtin_family("d1mod4", 2) : c.family.build(c.n);
  const OrderingSpec& ord = c.ordering;
  detail::header(os, c, fam);
  switch (c.command) {
    case Command::Count: {
      os << counting_function(fam, ord, c.x_grid(), c.limits.max_x, c.limits.max_primes).to_csv();
      return kExitOk;
    }
    case Command::Fit: {
      const auto sample = counting_function(fam, ord, c.x_grid(), c.limits.max_x, c.limits.max_primes);
      os << fit_power_log(sample, c.window).to_text();
      os << sample.to_csv();
      return kExitOk;
    }
    case Command::Invariants: {
      detail::write_invariants(os, fam, ord);
      return kExitOk;
    }
    case Command::PoissonCheck: {
      os << "class=" << to_string(classify_family(fam)) << "\n";
      return detail::write_poisson(os, poisson_check(fam, ord, c.truncation, c.limits.max_n, c.limits.max_primes));
    }
    case Command::GwCheck: {
      const auto r = greenberg_wiles_check(detail::build_box(c));
      os << "selmer=" << r.selmer << "\n";
      os << "dual_selmer=" << r.dual_selmer << "\n";
      os << "lhs=" << to_string(r.lhs) << "\n";
      os << "rhs=" << to_string(r.rhs) << "\n";
      os << "equal=" << (r.equal() ? 1 : 0) << "\n";
      return r.equal() ? kExitOk : kExitMismatch;
    }
    case Command::ExampleD1mod4: {
      const ConditionFamily& ex = fam;
      const auto grid = c.x_grid();
      const auto sieve = d1mod4_sieve_counts(grid);
      const auto direct = counting_function(ex, ord, grid, c.limits.max_x, c.limits.max_primes);
      const bool counts_agree = sieve.count == direct.count;
      detail::write_invariants(os, ex, ord);
      os << "counts_agree=" << (counts_agree ? 1 : 0) << "\n";
      const auto fit = fit_power_log(sieve, c.window);
      os << fit.to_text();
      const int code = detail::write_poisson(os, poisson_check(ex, ord, c.truncation, c.limits.max_n, c.limits.max_primes));
      os << sieve.to_csv();
      return counts_agree ? code : kExitMismatch;
    }
  }
  return kExitUsage;
}

/// run() with exceptions mapped to exit codes; diagnostics go to `err`.
inline int run_guarded(const RunConfig& c, std::ostream& os, std::ostream& err) {
  try {
    return run(c, os);
  } catch (const ResourceCapError& e) {
    err << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace galcount
