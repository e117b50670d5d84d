#pragma once

// Frobenian Euler products prod_p F_p(p^{-s}) with exact cyclotomic coefficients,
// their truncated Dirichlet coefficients, numerical evaluation and singularity data.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "galcount/arith.hpp"
#include "galcount/cyclotomic.hpp"
#include "galcount/error.hpp"

namespace galcount {

/// Polynomial in x = p^{-s}, lowest degree first.
using EulerFactor = std::vector<CyclotomicScalar>;

inline EulerFactor constant_factor(int field, const Rational& c = 1) { return {CyclotomicScalar(field, c)}; }

inline bool is_zero_factor(const EulerFactor& f) {
  for (const auto& c : f) {
    if (!c.is_zero()) return false;
  }
  return true;
}

inline bool is_one_factor(const EulerFactor& f) {
  if (f.empty() || f[0] != CyclotomicScalar(f[0].order(), 1)) return false;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (!f[i].is_zero()) return false;
  }
  return true;
}

inline void trim_factor(EulerFactor& f) {
  while (f.size() > 1 && f.back().is_zero()) f.pop_back();
}

inline EulerFactor multiply_factors(const EulerFactor& a, const EulerFactor& b) {
  if (a.empty() || b.empty()) throw DomainError("empty Euler factor");
  EulerFactor out(a.size() + b.size() - 1, CyclotomicScalar(a[0].order()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
    }
  }
  trim_factor(out);
  return out;
}

/// "c0 + c1 x + ..." with exact coefficients, for diagnostics.
inline std::string factor_to_string(const EulerFactor& f) {
  std::string out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].is_zero() && !(k == 0 && f.size() == 1)) continue;
    if (!out.empty()) out += " + ";
    out += "(" + f[k].to_string() + ")";
    if (k == 1) out += "x";
    if (k > 1) out += "x^" + std::to_string(k);
  }
  return out.empty() ? "(0)" : out;
}

inline std::complex<double> evaluate_factor(const EulerFactor& f, std::complex<double> x) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = f.size(); k-- > 0;) acc = acc * x + f[k].to_complex();
  return acc;
}

/// prefactor * prod_{p in exceptional} E_p * prod_{other p} F_p, where F_p is
/// the generic callback if present, else the class factor for p mod modulus
/// (absent classes contribute 1).
struct EulerProductSpec {
  int field = 1;
  i64 modulus = 1;
  std::map<i64, EulerFactor> class_factors;
  std::map<i64, EulerFactor> exceptional;
  std::function<EulerFactor(i64)> generic_factor;
  /// Class table dominating |F_p| coefficient-wise; used in bound mode and for tail bounds.
  std::map<i64, EulerFactor> majorant;
  CyclotomicScalar prefactor{1, 1};

  EulerProductSpec() = default;
  explicit EulerProductSpec(int field_order, i64 m = 1)
      : field(field_order), modulus(m), prefactor(field_order, 1) {}

  EulerFactor factor_at(i64 p) const {
    if (auto it = exceptional.find(p); it != exceptional.end()) return it->second;
    if (generic_factor) return generic_factor(p);
    if (auto it = class_factors.find(mod(p, modulus)); it != class_factors.end()) return it->second;
    return constant_factor(field);
  }
};

/// Product of two specs over the same field.
inline EulerProductSpec operator*(const EulerProductSpec& a, const EulerProductSpec& b) {
  if (a.field != b.field) throw DomainError("Euler products over different fields");
  EulerProductSpec out(a.field, lcm(a.modulus, b.modulus));
  out.prefactor = a.prefactor * b.prefactor;
  for (const auto& [p, f] : a.exceptional) out.exceptional[p] = multiply_factors(f, b.factor_at(p));
  for (const auto& [p, f] : b.exceptional) {
    if (!out.exceptional.count(p)) out.exceptional[p] = multiply_factors(a.factor_at(p), f);
  }
  if (a.generic_factor || b.generic_factor) {
    out.generic_factor = [a, b](i64 p) { return multiply_factors(a.factor_at(p), b.factor_at(p)); };
  }
  for (i64 c = 0; c < out.modulus; ++c) {
    auto pick = [c](const EulerProductSpec& s) {
      if (auto it = s.class_factors.find(mod(c, s.modulus)); it != s.class_factors.end()) return it->second;
      return constant_factor(s.field);
    };
    EulerFactor f = multiply_factors(pick(a), pick(b));
    if (!is_one_factor(f)) out.class_factors[c] = std::move(f);
  }
  return out;
}

/// a_1..a_N of a Dirichlet series; index 0 unused.
class CoefficientSeries {
 public:
  CoefficientSeries(int field, i64 n) : field_(field), coeffs_(static_cast<std::size_t>(n) + 1, CyclotomicScalar(field)) {
    if (n < 1) throw DomainError("series truncation must be positive");
  }

  int field() const { return field_; }
  i64 truncation() const { return static_cast<i64>(coeffs_.size()) - 1; }
  const CyclotomicScalar& operator[](i64 k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  CyclotomicScalar& operator[](i64 k) { return coeffs_.at(static_cast<std::size_t>(k)); }

  CoefficientSeries& operator+=(const CoefficientSeries& o) {
    check(o);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      if (!o.coeffs_[k].is_zero()) coeffs_[k] += o.coeffs_[k];
    }
    return *this;
  }

  CoefficientSeries scaled(const CyclotomicScalar& c) const {
    CoefficientSeries out = *this;
    for (auto& v : out.coeffs_) {
      if (!v.is_zero()) v *= c;
    }
    return out;
  }

  /// Dirichlet convolution truncated at N.
  CoefficientSeries convolve(const CoefficientSeries& o) const {
    check(o);
    const i64 n = truncation();
    CoefficientSeries out(field_, n);
    for (i64 i = 1; i <= n; ++i) {
      if (coeffs_[i].is_zero()) continue;
      for (i64 j = 1; i * j <= n; ++j) {
        if (!o.coeffs_[j].is_zero()) out.coeffs_[i * j] += coeffs_[i] * o.coeffs_[j];
      }
    }
    return out;
  }

  friend bool operator==(const CoefficientSeries& a, const CoefficientSeries& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  /// Lines "k,value" for the nonzero coefficients (all of them when `all` is set).
  std::string dump(bool all = false) const {
    std::string out;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      if (!all && coeffs_[k].is_zero()) continue;
      out += std::to_string(k) + "," + coeffs_[k].to_string() + "\n";
    }
    return out;
  }

 private:
  void check(const CoefficientSeries& o) const {
    if (o.field_ != field_ || o.coeffs_.size() != coeffs_.size()) throw DomainError("incompatible series");
  }

  int field_;
  std::vector<CyclotomicScalar> coeffs_;
};

inline constexpr i64 kDefaultSeriesCap = 10'000'000;

/// Exact coefficients a_1..a_N. Only multiples of the exceptional primes whose
/// factor has zero constant term can be nonzero; only those indices are visited.
inline CoefficientSeries expand(const EulerProductSpec& spec, i64 n, i64 cap = kDefaultSeriesCap) {
  if (n < 1) throw DomainError("expand: N must be positive");
  if (n > cap) throw ResourceCapError("expand: N = " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  CoefficientSeries out(spec.field, n);
  if (spec.prefactor.is_zero()) return out;

  // Exceptional primes whose factor has zero constant term must divide every index with a_m != 0.
  i64 step = 1;
  std::vector<std::pair<i64, const CyclotomicScalar*>> constants;
  const CyclotomicScalar one(spec.field, 1);
  for (const auto& [p, f] : spec.exceptional) {
    if (is_zero_factor(f)) return out;
    if (f[0].is_zero()) {
      if (step > n / p) return out;
      step *= p;
    } else if (f[0] != one) {
      constants.emplace_back(p, &f[0]);
    }
  }

  std::unordered_map<i64, EulerFactor> cache;
  auto factor = [&](i64 p) -> const EulerFactor& {
    auto it = cache.find(p);
    if (it == cache.end()) {
      EulerFactor f = spec.factor_at(p);
      if (f.empty()) throw DomainError("empty Euler factor at " + std::to_string(p));
      if (!spec.exceptional.count(p) && f[0] != one) {
        throw DomainError("Euler factor at non-exceptional prime " + std::to_string(p) + " has constant term " +
                          f[0].to_string());
      }
      it = cache.emplace(p, std::move(f)).first;
    }
    return it->second;
  };

  const PrimeSieve sieve(n);
  for (i64 m = step; m <= n; m += step) {
    CyclotomicScalar value = spec.prefactor;
    i64 rest = m;
    bool zero = false;
    while (rest > 1) {
      const i64 p = sieve.smallest_factor(rest);
      std::size_t k = 0;
      while (rest % p == 0) {
        rest /= p;
        ++k;
      }
      const EulerFactor& f = factor(p);
      if (k >= f.size() || f[k].is_zero()) {
        zero = true;
        break;
      }
      if (f[k] != one) value *= f[k];
    }
    if (zero) continue;
    for (const auto& [p, c] : constants) {
      if (m % p != 0) value *= *c;
    }
    out[m] = std::move(value);
  }
  return out;
}

struct Singularity {
  Rational abscissa = 0;  // 1/a; 0 when there is no singularity
  Rational order = 0;     // b (an upper bound in bound mode)
  bool upper_bound = false;

  friend bool operator==(const Singularity&, const Singularity&) = default;
};

/// Abscissa 1/a and order b from the class table: a is the least exponent whose
/// coefficient has nonzero density, b the density-weighted coefficient at x^a.
inline Singularity singularity(const EulerProductSpec& spec, bool bound_mode = false) {
  const auto& table = bound_mode ? spec.majorant : spec.class_factors;
  if (bound_mode && table.empty()) throw DomainError("singularity: bound mode needs a majorant table");
  if (!bound_mode && spec.generic_factor && spec.class_factors.empty()) {
    throw DomainError("singularity: spec has no class table; use bound mode");
  }
  std::vector<const EulerFactor*> units;
  for (i64 c = 0; c < spec.modulus; ++c) {
    if (std::gcd(c, spec.modulus) != 1) continue;
    auto it = table.find(c);
    units.push_back(it == table.end() ? nullptr : &it->second);
  }
  std::optional<std::size_t> a;
  for (const auto* f : units) {
    if (!f) continue;
    for (std::size_t k = 1; k < f->size(); ++k) {
      if (!(*f)[k].is_zero()) {
        if (!a || k < *a) a = k;
        break;
      }
    }
  }
  Singularity s;
  s.upper_bound = bound_mode;
  if (!a) return s;
  s.abscissa = Rational(1, static_cast<unsigned long>(*a));
  for (const auto* f : units) {
    if (!f || *a >= f->size()) continue;
    const auto& c = (*f)[*a];
    if (!c.is_rational()) throw DomainError("singularity: leading coefficient is not rational");
    if (c.rational_value() < 0) throw DomainError("singularity: leading coefficient is negative");
    s.order += c.rational_value();
  }
  s.order /= static_cast<long>(units.size());
  return s;
}

struct EulerValue {
  std::complex<double> value;
  double error_bound;
};

/// Sum over primes p > P of p^{-t} is at most 1.25506 t P^{1-t} / ((t - 1) log P),
/// from pi(x) < 1.25506 x / log x and partial summation.
inline double prime_tail_bound(double t, double p_cut) {
  if (t <= 1.0) throw DomainError("prime tail bound needs exponent > 1");
  return 1.25506 * t * std::pow(p_cut, 1.0 - t) / ((t - 1.0) * std::log(p_cut));
}

/// Absolutely convergent regime: partial product over p <= P plus a rigorous bound on the tail.
inline EulerValue evaluate(const EulerProductSpec& spec, double s, i64 p_cut) {
  if (p_cut < 3) throw DomainError("evaluate: prime cutoff too small");
  const auto& table = spec.class_factors.empty() ? spec.majorant : spec.class_factors;
  if (table.empty() && spec.generic_factor) throw DomainError("evaluate: no class table to bound the tail");

  // C = largest |coefficient| of a nonconstant term, a = least exponent of such a term.
  double big_c = 0.0;
  std::size_t a = 0;
  for (const auto& [c, f] : table) {
    if (std::gcd(c, spec.modulus) != 1) continue;
    for (std::size_t k = 1; k < f.size(); ++k) {
      if (f[k].is_zero()) continue;
      big_c = std::max(big_c, std::abs(f[k].to_complex()));
      if (a == 0 || k < a) a = k;
    }
  }
  if (a != 0 && s * static_cast<double>(a) <= 1.0) {
    throw DomainError("evaluate: s is at or left of the abscissa 1/" + std::to_string(a));
  }

  const std::complex<double> one(1.0, 0.0);
  std::complex<double> value = spec.prefactor.to_complex();
  const PrimeSieve sieve(p_cut);
  for (i64 p : sieve.primes()) value *= evaluate_factor(spec.factor_at(p), std::pow(static_cast<double>(p), -s) * one);
  for (const auto& [p, f] : spec.exceptional) {
    if (p > p_cut) value *= evaluate_factor(f, std::pow(static_cast<double>(p), -s) * one);
  }
  if (a == 0) return {value, 0.0};

  // |F_p(x) - 1| <= C x^a / (1 - x) = eps_p; |log F_p| <= 2 eps_p once eps_p <= 1/2.
  const double x_cut = std::pow(static_cast<double>(p_cut), -s);
  const double eps = big_c * std::pow(static_cast<double>(p_cut), -s * static_cast<double>(a)) / (1.0 - x_cut);
  if (eps > 0.5) throw DomainError("evaluate: prime cutoff too small for a tail bound");
  const double tau = 2.0 * big_c / (1.0 - x_cut) * prime_tail_bound(s * static_cast<double>(a), static_cast<double>(p_cut));
  return {value, std::abs(value) * std::expm1(tau)};
}

/// Conditional regime: partial sums sum_{k <= N_i} a_k k^{-s} at the given checkpoints.
inline std::vector<std::pair<i64, std::complex<double>>> evaluate_conditional(const EulerProductSpec& spec, double s,
                                                                               const std::vector<i64>& checkpoints) {
  if (checkpoints.empty()) return {};
  const i64 n = *std::max_element(checkpoints.begin(), checkpoints.end());
  const CoefficientSeries series = expand(spec, n);
  std::vector<std::pair<i64, std::complex<double>>> out;
  std::complex<double> acc = 0.0;
  std::vector<i64> sorted = checkpoints;
  std::sort(sorted.begin(), sorted.end());
  std::size_t next = 0;
  for (i64 k = 1; k <= n; ++k) {
    if (!series[k].is_zero()) acc += series[k].to_complex() * std::pow(static_cast<double>(k), -s);
    while (next < sorted.size() && sorted[next] == k) out.emplace_back(sorted[next++], acc);
  }
  return out;
}

}  // namespace galcount
