#pragma once

// Elementary integer arithmetic shared by the whole library: modular powers,
// factorisation, primitive roots and a prime sieve.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "galcount/error.hpp"

namespace galcount {

using i64 = std::int64_t;
using u64 = std::uint64_t;

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline i64 powmod(i64 base, u64 exp, i64 m) {
  if (m == 1) return 0;
  i64 result = 1;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo m; throws when gcd(a, m) != 1.
inline i64 invmod(i64 a, i64 m) {
  i64 old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) throw DomainError("invmod: element not invertible");
  return mod(old_s, m);
}

inline i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// base^exp, clamped to `cap` on overflow or when the value exceeds cap.
inline u64 saturating_pow(u64 base, int exp, u64 cap) {
  u64 r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > cap / base) return cap;
    r *= base;
  }
  return std::min(r, cap);
}

inline int valuation(i64 n, i64 p) {
  if (n == 0) throw DomainError("valuation of zero");
  int v = 0;
  n = n < 0 ? -n : n;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 small : {2, 3, 5, 7, 11, 13}) {
    if (n % small == 0) return n == small;
  }
  for (i64 d = 17; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

using Factorization = std::vector<std::pair<i64, int>>;

inline Factorization factorize(i64 n) {
  Factorization out;
  n = n < 0 ? -n : n;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factorize(n)) {
    const std::size_t size = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline int mobius(i64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline i64 lcm(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

/// Multiplicative order of a modulo m, given a multiple `group_order` of it.
inline i64 multiplicative_order(i64 a, i64 m, i64 group_order) {
  i64 order = group_order;
  for (auto [q, e] : factorize(group_order)) {
    for (int i = 0; i < e && order % q == 0 && powmod(a, static_cast<u64>(order / q), m) == 1; ++i) {
      order /= q;
    }
  }
  return order;
}

/// Smallest g that generates (Z/p^k)^* for every k >= 1 (p odd prime).
inline i64 canonical_primitive_root(i64 p) {
  if (p == 2) return 1;
  const i64 p2 = p * p;
  for (i64 g = 2; g < p2; ++g) {
    if (g % p == 0) continue;
    if (multiplicative_order(g, p, p - 1) != p - 1) continue;
    if (powmod(g, static_cast<u64>(p - 1), p2) == 1) continue;
    return g;
  }
  throw DomainError("no primitive root found");
}

/// Additive order of x in Z/m.
inline i64 additive_order(i64 x, i64 m) { return m / std::gcd(mod(x, m), m); }

/// Chinese remainder: x = a mod m1, x = b mod m2 with coprime moduli.
inline i64 crt_pair(i64 a, i64 m1, i64 b, i64 m2) {
  const i64 t = mulmod(mod(b - a, m2), invmod(m1 % m2, m2), m2);
  return mod(a + m1 * t, m1 * m2);
}

/// Primes up to a bound (linear sieve) with a smallest-prime-factor table.
class PrimeSieve {
 public:
  explicit PrimeSieve(i64 limit) : limit_(std::max<i64>(limit, 2)), spf_(static_cast<std::size_t>(limit_) + 1, 0) {
    for (i64 i = 2; i <= limit_; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<std::uint32_t>(i);
        primes_.push_back(i);
      }
      for (i64 p : primes_) {
        if (p > spf_[i] || i * p > limit_) break;
        spf_[i * p] = static_cast<std::uint32_t>(p);
      }
    }
  }

  i64 limit() const { return limit_; }
  const std::vector<i64>& primes() const { return primes_; }
  bool is_prime(i64 n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
  i64 smallest_factor(i64 n) const { return spf_[n]; }

  Factorization factorize(i64 n) const {
    Factorization out;
    while (n > 1) {
      const i64 p = spf_[n];
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

 private:
  i64 limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<i64> primes_;
};

}  // namespace galcount
