#pragma once

#include <gmpxx.h>

#include "pepsblend/complex_rational.hpp"

namespace pepsblend {

// Gaussian integer (Z[i]) working ring. The contraction engines clear
// denominators once per tensor and then run entirely on mpz pairs, which is
// several times faster than carrying canonical rationals through the hot
// loops. Not a field; used only where no division occurs.
struct GaussianInt {
  mpz_class re;
  mpz_class im;

  GaussianInt() : re(0), im(0) {}
  GaussianInt(mpz_class r, mpz_class i) : re(std::move(r)), im(std::move(i)) {}
  GaussianInt(long r) : re(r), im(0) {}  // NOLINT

  bool is_zero() const { return re == 0 && im == 0; }

  GaussianInt operator-() const { return {-re, -im}; }
  GaussianInt operator+(const GaussianInt& o) const { return {re + o.re, im + o.im}; }
  GaussianInt operator-(const GaussianInt& o) const { return {re - o.re, im - o.im}; }
  GaussianInt operator*(const GaussianInt& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianInt& operator+=(const GaussianInt& o) { re += o.re; im += o.im; return *this; }
  GaussianInt& operator-=(const GaussianInt& o) { re -= o.re; im -= o.im; return *this; }
  GaussianInt& operator*=(const GaussianInt& o) { *this = *this * o; return *this; }
  bool operator==(const GaussianInt& o) const { return re == o.re && im == o.im; }

  // In-place fused multiply-add; avoids temporaries in contraction loops.
  void add_mul(const GaussianInt& a, const GaussianInt& b) {
    mpz_addmul(re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
    mpz_submul(re.get_mpz_t(), a.im.get_mpz_t(), b.im.get_mpz_t());
    mpz_addmul(im.get_mpz_t(), a.re.get_mpz_t(), b.im.get_mpz_t());
    mpz_addmul(im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
  }

  ComplexRational over(const mpz_class& den) const {
    return {Rational(re, den), Rational(im, den)};
  }
};

inline GaussianInt zero_like(const GaussianInt&) { return {}; }
inline GaussianInt one_like(const GaussianInt&) { return GaussianInt(1); }
inline GaussianInt conj_value(const GaussianInt& z) { return {z.re, -z.im}; }
inline bool is_zero(const GaussianInt& z) { return z.is_zero(); }

// z scaled so that both parts are integers: z * den, with den the lcm of the
// two denominators.
inline GaussianInt scale_to_integer(const ComplexRational& z, const mpz_class& den) {
  mpz_class r = z.re().num() * (den / z.re().den());
  mpz_class i = z.im().num() * (den / z.im().den());
  return {std::move(r), std::move(i)};
}

inline mpz_class lcm_denominator(const ComplexRational& z, const mpz_class& acc = 1) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), acc.get_mpz_t(), z.re().den().get_mpz_t());
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), z.im().den().get_mpz_t());
  return l;
}

}  // namespace pepsblend
