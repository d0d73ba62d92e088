#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "pepsblend/complex_rational.hpp"
#include "pepsblend/field.hpp"
#include "pepsblend/linalg.hpp"
#include "pepsblend/gaussian_integer.hpp"
#include "pepsblend/prime_field.hpp"

namespace pepsblend {

// Homomorphic-imaging backend: Z[i] data is reduced modulo word-size primes
// p = 3 (mod 4), where F_p[i] = F_p[x]/(x^2+1) is a field, and results are
// lifted back by Chinese remaindering. Exact verification always follows a
// lift, so unlucky primes can only cost time, never correctness.

struct FpiContext {
  std::uint64_t p;  // prime, p = 3 (mod 4)
};

struct FpiElem {
  std::uint64_t re = 0;
  std::uint64_t im = 0;
  const FpiContext* ctx = nullptr;

  bool is_zero() const { return re == 0 && im == 0; }

  FpiElem make(std::uint64_t r, std::uint64_t i) const { return {r, i, ctx}; }

  FpiElem operator-() const {
    const std::uint64_t p = ctx->p;
    return make(re ? p - re : 0, im ? p - im : 0);
  }
  FpiElem operator+(const FpiElem& o) const {
    const std::uint64_t p = ctx->p;
    std::uint64_t r = re + o.re;
    if (r >= p) r -= p;
    std::uint64_t i = im + o.im;
    if (i >= p) i -= p;
    return make(r, i);
  }
  FpiElem operator-(const FpiElem& o) const {
    const std::uint64_t p = ctx->p;
    return make(re >= o.re ? re - o.re : re + (p - o.re), im >= o.im ? im - o.im : im + (p - o.im));
  }
  FpiElem operator*(const FpiElem& o) const {
    const std::uint64_t p = ctx->p;
    std::uint64_t ac = detail::mulmod_u64(re, o.re, p);
    std::uint64_t bd = detail::mulmod_u64(im, o.im, p);
    std::uint64_t ad = detail::mulmod_u64(re, o.im, p);
    std::uint64_t bc = detail::mulmod_u64(im, o.re, p);
    std::uint64_t r = ac >= bd ? ac - bd : ac + (p - bd);
    std::uint64_t i = ad + bc;
    if (i >= p) i -= p;
    return make(r, i);
  }
  FpiElem inverse() const {
    const std::uint64_t p = ctx->p;
    std::uint64_t n2 = detail::mulmod_u64(re, re, p) + detail::mulmod_u64(im, im, p);
    if (n2 >= p) n2 -= p;
    if (n2 == 0) throw DivisionByZero();
    std::uint64_t inv = detail::invmod_u64(n2, p);
    return make(detail::mulmod_u64(re, inv, p), detail::mulmod_u64(im ? p - im : 0, inv, p));
  }
  FpiElem operator/(const FpiElem& o) const { return *this * o.inverse(); }
  FpiElem& operator+=(const FpiElem& o) { *this = *this + o; return *this; }
  FpiElem& operator-=(const FpiElem& o) { *this = *this - o; return *this; }
  FpiElem& operator*=(const FpiElem& o) { *this = *this * o; return *this; }
  bool operator==(const FpiElem& o) const { return re == o.re && im == o.im; }
};

inline FpiElem zero_like(const FpiElem& x) { return {0, 0, x.ctx}; }
inline FpiElem one_like(const FpiElem& x) { return {1, 0, x.ctx}; }
inline FpiElem conj_value(const FpiElem& x) { return {x.re, x.im ? x.ctx->p - x.im : 0, x.ctx}; }
inline bool is_zero(const FpiElem& x) { return x.is_zero(); }

static_assert(FieldType<FpiElem>);

template <>
struct uses_fraction_free<FpiElem> : std::false_type {};

// Deterministic descending table of primes p = 3 (mod 4) just below 2^62.
inline std::uint64_t imaging_prime(std::size_t index) {
  static std::vector<std::uint64_t> cache;
  while (cache.size() <= index) {
    std::uint64_t candidate = cache.empty() ? ((1ULL << 62) - 1) : cache.back() - 4;
    while (!detail::is_prime_u64(candidate)) candidate -= 4;
    cache.push_back(candidate);
  }
  return cache[index];
}

inline std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  // mpz_fdiv_ui returns the nonnegative remainder regardless of sign.
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

inline FpiElem reduce_gaussian(const GaussianInt& z, const FpiContext* ctx) {
  return {reduce_mpz(z.re, ctx->p), reduce_mpz(z.im, ctx->p), ctx};
}

// Incremental CRT accumulator with symmetric-range lift.
class CrtAccumulator {
 public:
  CrtAccumulator() : value_(0), modulus_(1) {}

  void add_residue(std::uint64_t residue, std::uint64_t p) {
    std::uint64_t current = reduce_mpz(value_, p);
    std::uint64_t minv = detail::invmod_u64(reduce_mpz(modulus_, p), p);
    std::uint64_t delta = residue >= current ? residue - current : residue + (p - current);
    delta = detail::mulmod_u64(delta, minv, p);
    value_ += modulus_ * mpz_class(static_cast<unsigned long>(delta));
    modulus_ *= mpz_class(static_cast<unsigned long>(p));
  }

  // Symmetric representative in (-M/2, M/2].
  mpz_class lift() const {
    mpz_class half = modulus_ / 2;
    if (value_ > half) return value_ - modulus_;
    return value_;
  }
  const mpz_class& modulus() const { return modulus_; }

 private:
  mpz_class value_;
  mpz_class modulus_;
};

// Wang-style rational reconstruction: the unique n/d with |n|, d <= sqrt(m/2)
// congruent to residue mod m, if one exists.
inline std::optional<Rational> rational_reconstruct(const mpz_class& residue, const mpz_class& m) {
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = residue % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (t1 == 0) return std::nullopt;
  mpz_class den = t1 < 0 ? mpz_class(-t1) : t1;
  mpz_class num = t1 < 0 ? mpz_class(-r1) : r1;
  if (den > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return std::nullopt;
  return Rational(num, den);
}

}  // namespace pepsblend
