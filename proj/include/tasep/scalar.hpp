#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <string>

namespace tasep {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Uniform interface over the two scalar fields the Bethe machinery runs on:
/// exact rationals for the structural lemmas, complex doubles for quadrature.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  using Norm = Rational;
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static Norm abs(const Rational& v) { return ::abs(v); }
  static Rational pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (sgn(base) == 0) {
      if (e < 0) throw std::domain_error("zero to a negative power");
      return Rational(0);
    }
    const unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), m);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), m);
    Rational r = e > 0 ? Rational(num, den) : Rational(den, num);
    r.canonicalize();
    return r;
  }
};

template <>
struct ScalarTraits<Complex> {
  using Norm = double;
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static bool is_zero(const Complex& v) { return v == Complex(0.0, 0.0); }
  static Norm abs(const Complex& v) { return std::abs(v); }
  static Complex pow(Complex base, long e) {
    if (e < 0) {
      base = 1.0 / base;
      e = -e;
    }
    Complex r{1.0, 0.0};
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }
};

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace tasep
