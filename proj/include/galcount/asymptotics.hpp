#pragma once

// Counting functions N(X) = #{f in H^1_L : weight(f) < X}, power-log fits of
// N(X) ~ c X^alpha (log X)^beta, surjectivity proportions, and the sieve
// oracles used to cross-check the enumerator at scale.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "galcount/global_classes.hpp"
#include "galcount/local_conditions.hpp"

namespace galcount {

/// `points` geometrically spaced integers from lo to hi inclusive (duplicates dropped).
inline std::vector<u64> log_grid(double lo, double hi, int points) {
  if (lo < 2 || hi < lo || points < 1) throw DomainError("log_grid: need 2 <= lo <= hi and points >= 1");
  std::vector<u64> out;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 1.0 : static_cast<double>(i) / (points - 1);
    const u64 x = static_cast<u64>(std::llround(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))));
    if (out.empty() || x > out.back()) out.push_back(x);
  }
  return out;
}

struct CountSample {
  std::string family;
  std::string ordering;
  int n = 2;
  std::vector<u64> x;
  std::vector<i64> count;

  std::string to_csv() const {
    std::string out = "X,N\n";
    for (std::size_t i = 0; i < x.size(); ++i) out += std::to_string(x[i]) + "," + std::to_string(count[i]) + "\n";
    return out;
  }
};

inline constexpr u64 kDefaultCountCap = 1'000'000'000;

inline void check_grid(const std::vector<u64>& grid, u64 cap) {
  if (grid.empty()) throw DomainError("empty X grid");
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("X grid must be ascending");
  if (grid.back() > cap) throw ResourceCapError("X grid exceeds the enumeration cap " + std::to_string(cap));
}

/// Turns a weight histogram (bin i = weights in [grid[i-1], grid[i])) into cumulative counts.
inline std::vector<i64> cumulative(std::vector<i64> bins) {
  for (std::size_t i = 1; i < bins.size(); ++i) bins[i] += bins[i - 1];
  return bins;
}

inline std::size_t grid_bin(const std::vector<u64>& grid, u64 weight) {
  return static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), weight) - grid.begin());
}

inline CountSample counting_function(const ConditionFamily& family, const OrderingSpec& ordering,
                                     const std::vector<u64>& grid, u64 cap = kDefaultCountCap, i64 max_primes = 0) {
  check_grid(grid, cap);
  std::vector<i64> bins(grid.size(), 0);
  for_each_character(
      family, ordering, grid.back(),
      [&](const CharacterView& v) {
        const std::size_t i = grid_bin(grid, v.weight);
        if (i < bins.size()) ++bins[i];
      },
      max_primes);
  return {family.name(), ordering.name(), family.n(), grid, cumulative(std::move(bins))};
}

// ---------------------------------------------------------------------------
// Fitting

struct PowerLogFit {
  double alpha = 0;
  double beta = 0;
  double c = 0;
  double residual = 0;  // RMS of log N in the fitted window
  std::size_t points = 0;

  std::string to_text() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "alpha=%.6f\nbeta=%.6f\nc=%.6g\nresidual=%.3e\npoints=%zu\n", alpha, beta, c,
                  residual, points);
    return buf;
  }
};

/// Least squares log N = log c + alpha log X + beta log log X over the top `window` fraction of the grid.
inline PowerLogFit fit_power_log(const CountSample& sample, double window = 0.6) {
  if (sample.x.size() != sample.count.size()) throw DomainError("fit_power_log: malformed sample");
  if (sample.x.size() < 8) throw DomainError("fit_power_log: need at least 8 grid points");
  if (sample.x.front() < 3 || std::log10(static_cast<double>(sample.x.back()) / static_cast<double>(sample.x.front())) < 3.0) {
    throw DomainError("fit_power_log: grid must span at least 3 decades above X = 3");
  }
  const std::size_t m = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(window * static_cast<double>(sample.x.size()))));
  const std::size_t start = sample.x.size() - std::min(m, sample.x.size());
  if (sample.count[start] <= 0) throw DomainError("fit_power_log: zero counts in the fitted window");
  if (sample.count[start] == sample.count.back()) throw DomainError("fit_power_log: degenerate sample (constant N)");

  const std::size_t k = sample.x.size() - start;
  Eigen::MatrixXd a(k, 3);
  Eigen::VectorXd y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double lx = std::log(static_cast<double>(sample.x[start + i]));
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = lx;
    a(static_cast<Eigen::Index>(i), 2) = std::log(lx);
    y(static_cast<Eigen::Index>(i)) = std::log(static_cast<double>(sample.count[start + i]));
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd err = a * coef - y;
  PowerLogFit f;
  f.c = std::exp(coef(0));
  f.alpha = coef(1);
  f.beta = coef(2);
  f.residual = std::sqrt(err.squaredNorm() / static_cast<double>(k));
  f.points = k;
  return f;
}

// ---------------------------------------------------------------------------
// Surjectivity

enum class LimitClass { One, Positive, Undetermined };

inline std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::One: return "1";
    case LimitClass::Positive: return "positive";
    case LimitClass::Undetermined: return "undetermined";
  }
  return "?";
}

/// Predicted limit of the surjective proportion: 1 when T' = Z/n, positive when
/// generic inertia images generate Z/n, otherwise not predicted.
inline LimitClass predicted_limit(const ConditionFamily& family, const OrderingSpec& ordering) {
  if (minimal_inertia_subgroup(family, ordering) == family.n()) return LimitClass::One;
  if (generic_inertia_subgroup(family, ordering) == family.n()) return LimitClass::Positive;
  return LimitClass::Undetermined;
}

struct SurjectivityPoint {
  u64 x = 0;
  i64 total = 0;
  i64 surjective = 0;          // by filtering image orders
  i64 mobius_surjective = 0;   // by Moebius inversion over subgroup counts
  Rational ratio() const { return total == 0 ? Rational(0) : make_rational(surjective, total); }
};

struct SurjectivityReport {
  int n = 2;
  std::vector<SurjectivityPoint> points;
  i64 minimal_inertia_order = 1;
  LimitClass limit = LimitClass::Undetermined;

  bool mobius_consistent() const {
    return std::all_of(points.begin(), points.end(),
                       [](const SurjectivityPoint& p) { return p.surjective == p.mobius_surjective; });
  }
  bool ratio_nondecreasing() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].ratio() < points[i - 1].ratio()) return false;
    }
    return true;
  }

  std::string to_csv() const {
    std::string out = "X,total,surjective,mobius,ratio\n";
    for (const auto& p : points) {
      out += std::to_string(p.x) + "," + std::to_string(p.total) + "," + std::to_string(p.surjective) + "," +
             std::to_string(p.mobius_surjective) + "," + to_string(p.ratio()) + "\n";
    }
    return out;
  }
};

inline SurjectivityReport surjective_proportion(const ConditionFamily& family, const OrderingSpec& ordering,
                                                const std::vector<u64>& grid, u64 cap = kDefaultCountCap) {
  check_grid(grid, cap);
  const int n = family.n();
  const std::vector<i64> divs = divisors(n);
  std::vector<i64> total(grid.size(), 0);
  std::vector<i64> surj(grid.size(), 0);
  std::map<i64, std::vector<i64>> by_divisor;
  for (i64 d : divs) by_divisor[d].assign(grid.size(), 0);
  for_each_character(family, ordering, grid.back(), [&](const CharacterView& v) {
    const std::size_t i = grid_bin(grid, v.weight);
    if (i >= grid.size()) return;
    ++total[i];
    if (v.image_order == n) ++surj[i];
    for (i64 d : divs) {
      if (d % v.image_order == 0) ++by_divisor[d][i];
    }
  });
  total = cumulative(std::move(total));
  surj = cumulative(std::move(surj));
  for (auto& [d, c] : by_divisor) c = cumulative(std::move(c));

  SurjectivityReport r;
  r.n = n;
  r.minimal_inertia_order = minimal_inertia_subgroup(family, ordering);
  r.limit = predicted_limit(family, ordering);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::map<i64, i64> counts;
    for (const auto& [d, c] : by_divisor) counts[d] = c[i];
    r.points.push_back({grid[i], total[i], surj[i], surjective_count(counts, n)});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sieve oracles (independent of the character machinery)

/// Squarefree indicator on [0, limit].
inline std::vector<bool> squarefree_table(u64 limit) {
  std::vector<bool> sf(limit + 1, true);
  for (u64 d = 2; d * d <= limit; ++d) {
    for (u64 m = d * d; m <= limit; m += d * d) sf[m] = false;
  }
  return sf;
}

/// 1 + #{fundamental discriminants D : |D| < X} at each grid point.
inline CountSample fundamental_discriminant_counts(const std::vector<u64>& grid) {
  check_grid(grid, kDefaultCountCap);
  const u64 top = grid.back();
  const auto sf = squarefree_table(top);
  std::vector<i64> bins(grid.size(), 0);
  auto add = [&](u64 w, i64 k) {
    const std::size_t i = grid_bin(grid, w);
    if (i < bins.size()) bins[i] += k;
  };
  for (u64 m = 1; m < top; m += 2) {
    if (!sf[m]) continue;
    add(m, 1);          // the one sign with D = 1 mod 4 (D = 1 is the trivial class)
    add(4 * m, 1);      // D = 4D', D' = 3 mod 4 for exactly one sign
    add(8 * m, 2);      // D = 8D', both signs
  }
  return {"full", "disc", 2, grid, cumulative(std::move(bins))};
}

/// Whether squarefree D = 1 mod 4 has D/p a nonzero square mod p for every p | D.
inline bool d1mod4_condition(i64 d, const PrimeSieve& sieve) {
  const i64 a = d < 0 ? -d : d;
  for (const auto& [p, e] : sieve.factorize(a)) {
    if (e > 1) return false;
    const i64 r = mod(d / p, p);
    if (r == 0 || powmod(r, static_cast<u64>((p - 1) / 2), p) != 1) return false;
  }
  return true;
}

/// Counts of the d = 1 mod 4 family by direct sieving: D squarefree, D = 1 mod 4, |D| < X, D/p square mod p.
inline CountSample d1mod4_sieve_counts(const std::vector<u64>& grid) {
  check_grid(grid, kDefaultCountCap);
  const u64 top = grid.back();
  const PrimeSieve sieve(static_cast<i64>(top));
  std::vector<i64> bins(grid.size(), 0);
  for (u64 m = 1; m < top; m += 2) {
    const i64 d = m % 4 == 1 ? static_cast<i64>(m) : -static_cast<i64>(m);
    if (d1mod4_condition(d, sieve)) {
      const std::size_t i = grid_bin(grid, m);
      if (i < bins.size()) ++bins[i];
    }
  }
  return {"d1mod4", "disc", 2, grid, cumulative(std::move(bins))};
}

}  // namespace galcount
