#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_n).
//
// A scalar is a rational vector (c_0, ..., c_{phi(n)-1}) standing for
// sum c_i zeta^i, kept reduced modulo the n-th cyclotomic polynomial, so that
// two scalars are equal exactly when their coefficient vectors are.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "galcount/arith.hpp"
#include "galcount/error.hpp"

namespace galcount {

using Rational = mpq_class;

inline Rational make_rational(i64 num, i64 den = 1) {
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first (monic).
inline std::vector<i64> cyclotomic_polynomial(int n) {
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<i64> num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (i64 d : divisors(n)) {
    if (d == n) continue;
    const std::vector<i64> den = cyclotomic_polynomial(static_cast<int>(d));
    const std::size_t dd = den.size() - 1;
    std::vector<i64> quot(num.size() - dd, 0);
    for (std::size_t i = num.size() - 1; i + 1 > dd; --i) {
      const i64 c = num[i];
      quot[i - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
      if (i == dd) break;
    }
    num = std::move(quot);
  }
  return num;
}

class CyclotomicField {
 public:
  explicit CyclotomicField(int n) : n_(n), phi_poly_(cyclotomic_polynomial(n)) {
    degree_ = static_cast<int>(phi_poly_.size()) - 1;
    powers_.resize(static_cast<std::size_t>(n));
    std::vector<i64> cur(static_cast<std::size_t>(degree_), 0);
    cur[0] = 1;
    for (int k = 0; k < n; ++k) {
      powers_[k] = cur;
      // multiply by x and reduce
      std::vector<i64> next(static_cast<std::size_t>(degree_) + 1, 0);
      for (int i = 0; i < degree_; ++i) next[i + 1] = cur[i];
      const i64 top = next[degree_];
      for (int i = 0; i < degree_; ++i) next[i] -= top * phi_poly_[i];
      next.pop_back();
      cur = std::move(next);
    }
  }

  static std::shared_ptr<const CyclotomicField> get(int n) {
    if (n < 1) throw DomainError("cyclotomic field order must be positive");
    static std::mutex lock;
    static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
    std::lock_guard guard(lock);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const CyclotomicField>(n);
    return slot;
  }

  int order() const { return n_; }
  int degree() const { return degree_; }
  const std::vector<i64>& modulus() const { return phi_poly_; }
  /// zeta^k reduced, as integer coefficients.
  const std::vector<i64>& power(i64 k) const { return powers_[static_cast<std::size_t>(mod(k, n_))]; }

 private:
  int n_;
  int degree_ = 0;
  std::vector<i64> phi_poly_;
  std::vector<std::vector<i64>> powers_;
};

class CyclotomicScalar {
 public:
  CyclotomicScalar() : CyclotomicScalar(1) {}
  explicit CyclotomicScalar(int n) : field_(CyclotomicField::get(n)), coeffs_(field_->degree()) {}
  CyclotomicScalar(int n, const Rational& value) : CyclotomicScalar(n) { coeffs_[0] = value; }

  static CyclotomicScalar root_of_unity(int n, i64 k) {
    CyclotomicScalar z(n);
    const auto& p = z.field_->power(k);
    for (std::size_t i = 0; i < p.size(); ++i) z.coeffs_[i] = static_cast<long>(p[i]);
    return z;
  }

  /// Builds sum c_i zeta^i from an unreduced coefficient list of any length.
  static CyclotomicScalar from_coefficients(int n, const std::vector<Rational>& raw) {
    CyclotomicScalar z(n);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == 0) continue;
      const auto& p = z.field_->power(static_cast<i64>(i));
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] != 0) z.coeffs_[j] += raw[i] * static_cast<long>(p[j]);
      }
    }
    return z;
  }

  int order() const { return field_->order(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c != 0) return false;
    }
    return true;
  }

  bool is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      if (coeffs_[i] != 0) return false;
    }
    return true;
  }

  Rational rational_value() const {
    if (!is_rational()) throw DomainError("cyclotomic scalar is not rational");
    return coeffs_[0];
  }

  CyclotomicScalar conj() const {
    std::vector<Rational> raw(static_cast<std::size_t>(order()));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) raw[static_cast<std::size_t>(mod(-static_cast<i64>(i), order()))] += coeffs_[i];
    return from_coefficients(order(), raw);
  }

  CyclotomicScalar norm_squared() const { return *this * conj(); }

  std::complex<double> to_complex() const {
    std::complex<double> z{0.0, 0.0};
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / order();
      z += coeffs_[i].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return z;
  }

  CyclotomicScalar& operator+=(const CyclotomicScalar& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  CyclotomicScalar& operator-=(const CyclotomicScalar& o) {
    check_same_field(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  CyclotomicScalar& operator*=(const Rational& r) {
    for (auto& c : coeffs_) c *= r;
    return *this;
  }
  CyclotomicScalar& operator*=(const CyclotomicScalar& o) {
    check_same_field(o);
    const std::size_t d = coeffs_.size();
    if (d == 1) {
      coeffs_[0] *= o.coeffs_[0];
      return *this;
    }
    std::vector<Rational> prod(2 * d - 1);
    for (std::size_t i = 0; i < d; ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (o.coeffs_[j] != 0) prod[i + j] += coeffs_[i] * o.coeffs_[j];
      }
    }
    const auto& phi = field_->modulus();
    for (std::size_t k = prod.size() - 1; k >= d; --k) {
      if (prod[k] == 0) continue;
      const Rational top = prod[k];
      for (std::size_t i = 0; i < d; ++i) {
        if (phi[i] != 0) prod[k - d + i] -= top * static_cast<long>(phi[i]);
      }
    }
    prod.resize(d);
    coeffs_ = std::move(prod);
    return *this;
  }

  friend CyclotomicScalar operator+(CyclotomicScalar a, const CyclotomicScalar& b) { return a += b; }
  friend CyclotomicScalar operator-(CyclotomicScalar a, const CyclotomicScalar& b) { return a -= b; }
  friend CyclotomicScalar operator*(CyclotomicScalar a, const CyclotomicScalar& b) { return a *= b; }
  friend CyclotomicScalar operator*(CyclotomicScalar a, const Rational& r) { return a *= r; }
  friend CyclotomicScalar operator-(CyclotomicScalar a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }

  friend bool operator==(const CyclotomicScalar& a, const CyclotomicScalar& b) {
    return a.order() == b.order() && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const CyclotomicScalar& a, const CyclotomicScalar& b) { return !(a == b); }

  /// "p/q" when rational, otherwise the colon tuple "c0:c1:...".
  std::string to_string() const {
    if (is_rational()) return coeffs_[0].get_str();
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i > 0) out += ':';
      out += coeffs_[i].get_str();
    }
    return out;
  }

 private:
  void check_same_field(const CyclotomicScalar& o) const {
    if (o.order() != order()) throw DomainError("cyclotomic scalars from different fields");
  }

  std::shared_ptr<const CyclotomicField> field_;
  std::vector<Rational> coeffs_;
};

}  // namespace galcount
