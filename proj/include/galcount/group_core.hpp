#pragma once

// Cyclic targets Z/n, their divisions, and Moebius inversion on the divisor lattice.

#include <map>
#include <numeric>
#include <vector>

#include "galcount/abelian_group.hpp"
#include "galcount/arith.hpp"
#include "galcount/cyclotomic.hpp"
#include "galcount/error.hpp"

namespace galcount {

/// T = Z/n with trivial Galois action.
class CyclicTarget {
 public:
  explicit CyclicTarget(int n) : n_(n) {
    if (n < 2) throw DomainError("cyclic target order must be at least 2");
  }
  int order() const { return n_; }
  FiniteAbelianGroup group() const { return FiniteAbelianGroup({n_}); }
  /// |H^0(Q, mu_n)|: the roots of unity of Q are +-1.
  int dual_invariants_order() const { return std::gcd(n_, 2); }

 private:
  int n_;
};

/// Orbits of Z/n under multiplication by units; each block lists residues in increasing order.
inline std::vector<std::vector<i64>> divisions(i64 n) {
  if (n < 1) throw DomainError("divisions: n must be positive");
  std::vector<i64> block_of(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<i64>> blocks;
  for (i64 x = 0; x < n; ++x) {
    if (block_of[x] >= 0) continue;
    std::vector<i64> orbit;
    for (i64 u = 1; u <= n; ++u) {
      if (std::gcd(u, n) != 1) continue;
      const i64 y = mod(x * u, n);
      if (block_of[y] < 0) {
        block_of[y] = static_cast<i64>(blocks.size());
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    blocks.push_back(std::move(orbit));
  }
  return blocks;
}

/// mu(d, n) on the divisor lattice of n, keyed by d | n: the coefficients with
/// #surjections = sum_d mu(d, n) * #{maps with image in the order-d subgroup}.
inline std::map<i64, int> mobius_divisor_lattice(i64 n) {
  if (n < 1) throw DomainError("mobius_divisor_lattice: n must be positive");
  std::map<i64, int> out;
  for (i64 d : divisors(n)) out[d] = mobius(n / d);
  return out;
}

}  // namespace galcount
