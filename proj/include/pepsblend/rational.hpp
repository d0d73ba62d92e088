#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "pepsblend/errors.hpp"

namespace pepsblend {

// Arbitrary-precision rational, always kept canonical: denominator > 0 and
// gcd(|num|, den) = 1. Backed by GMP's mpq layer; this wrapper exists to
// guarantee the canonical form on every construction path and to pin the
// "p/q" text format used across all file formats.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    if (den == 0) throw DivisionByZero();
    canonicalize();
  }
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    r.v_ = q;
    r.canonicalize();
    return r;
  }

  // m / 2^bits, canonical.
  static Rational dyadic(const mpz_class& m, unsigned bits) {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return Rational(m, den);
  }

  // Exact value of a binary double (no rounding involved).
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw NonFiniteInput();
    return from_mpq(mpq_class(x));
  }

  // Accepts "p/q" or a bare integer "p".
  static Rational parse(const std::string& text);

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& mpq() const { return v_; }

  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return from_mpq(-v_); }
  Rational operator+(const Rational& o) const { return from_mpq(v_ + o.v_); }
  Rational operator-(const Rational& o) const { return from_mpq(v_ - o.v_); }
  Rational operator*(const Rational& o) const { return from_mpq(v_ * o.v_); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw DivisionByZero();
    return from_mpq(v_ / o.v_);
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  std::strong_ordering operator<=>(const Rational& o) const {
    int c = cmp(v_, o.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inverse() const {
    if (is_zero()) throw DivisionByZero();
    return from_mpq(1 / v_);
  }

  double to_double() const { return v_.get_d(); }

  // Always "p/q", e.g. "0/1", "-3/4".
  std::string to_string() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

 private:
  void canonicalize() { v_.canonicalize(); }
  mpq_class v_;
};

inline Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw ConfigInvalid("empty rational literal");
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw ConfigInvalid("bad rational literal: " + text);
  if (q.get_den() == 0) throw DivisionByZero();
  return from_mpq(q);
}

inline Rational zero_like(const Rational&) { return Rational(); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational conj_value(const Rational& r) { return r; }
inline bool is_zero(const Rational& r) { return r.is_zero(); }

// 2^e as a rational, for e of either sign.
inline Rational pow2(long e) {
  mpz_class m = 1;
  mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(m) : Rational(1, m);
}

// Nearest point of the grid { m / 2^bits : m integer } to `sample`,
// rounding ties to even m. The conversion double -> rational is exact, so
// the only rounding is the final grid snap.
inline Rational snap_to_dyadic(double sample, unsigned bits) {
  if (!std::isfinite(sample)) throw NonFiniteInput();
  if (bits < 1) throw ConfigInvalid("snap_to_dyadic requires bits >= 1");
  mpq_class scaled = mpq_class(sample);
  mpz_mul_2exp(mpq_numref(scaled.get_mpq_t()), mpq_numref(scaled.get_mpq_t()), bits);
  scaled.canonicalize();
  const mpz_class& num = scaled.get_num();
  const mpz_class& den = scaled.get_den();
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  // r in [0, den): round up iff 2r > den, or 2r == den and q is odd.
  mpz_class twice = 2 * r;
  int c = cmp(twice, den);
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  return Rational::dyadic(q, bits);
}

}  // namespace pepsblend
