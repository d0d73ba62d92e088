#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "pepsblend/errors.hpp"

namespace pepsblend {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs (standard witness set).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid on (a, m); m prime and a != 0 mod m.
  std::int64_t t = 0, nt = 1;
  std::uint64_t r = m, nr = a % m;
  while (nr != 0) {
    std::uint64_t q = r / nr;
    std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * nt;
    t = nt; nt = tmp_t;
    std::uint64_t tmp_r = r - q * nr;
    r = nr; nr = tmp_r;
  }
  if (r != 1) throw DivisionByZero();
  return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(t);
}

}  // namespace detail

// Element of F_q for a runtime prime modulus q. The modulus travels with the
// value so that generic code can ask for zero/one of the right field and so
// that cross-field arithmetic is rejected instead of silently reduced.
class PrimeFieldElement {
 public:
  PrimeFieldElement() : v_(0), q_(2) {}
  PrimeFieldElement(std::uint64_t value, std::uint64_t q) : v_(0), q_(q) {
    check_modulus(q);
    v_ = value % q;
  }
  static PrimeFieldElement from_signed(std::int64_t value, std::uint64_t q) {
    check_modulus(q);
    std::int64_t m = static_cast<std::int64_t>(q);
    std::int64_t r = value % m;
    if (r < 0) r += m;
    return PrimeFieldElement(static_cast<std::uint64_t>(r), q);
  }

  std::uint64_t value() const { return v_; }
  std::uint64_t modulus() const { return q_; }
  bool is_zero() const { return v_ == 0; }

  PrimeFieldElement operator-() const { return raw(v_ == 0 ? 0 : q_ - v_, q_); }
  PrimeFieldElement operator+(const PrimeFieldElement& o) const {
    match(o);
    std::uint64_t s = v_ + o.v_;
    if (s >= q_ || s < v_) s -= q_;
    return raw(s, q_);
  }
  PrimeFieldElement operator-(const PrimeFieldElement& o) const {
    match(o);
    return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + (q_ - o.v_), q_);
  }
  PrimeFieldElement operator*(const PrimeFieldElement& o) const {
    match(o);
    return raw(detail::mulmod_u64(v_, o.v_, q_), q_);
  }
  PrimeFieldElement operator/(const PrimeFieldElement& o) const {
    match(o);
    if (o.v_ == 0) throw DivisionByZero();
    return raw(detail::mulmod_u64(v_, detail::invmod_u64(o.v_, q_), q_), q_);
  }
  PrimeFieldElement& operator+=(const PrimeFieldElement& o) { *this = *this + o; return *this; }
  PrimeFieldElement& operator-=(const PrimeFieldElement& o) { *this = *this - o; return *this; }
  PrimeFieldElement& operator*=(const PrimeFieldElement& o) { *this = *this * o; return *this; }

  PrimeFieldElement inverse() const {
    if (v_ == 0) throw DivisionByZero();
    return raw(detail::invmod_u64(v_, q_), q_);
  }
  PrimeFieldElement pow(std::uint64_t e) const { return raw(detail::powmod_u64(v_, e, q_), q_); }

  bool operator==(const PrimeFieldElement& o) const {
    if (q_ != o.q_) throw MixedFields();
    return v_ == o.v_;
  }
  std::strong_ordering operator<=>(const PrimeFieldElement& o) const {
    if (q_ != o.q_) throw MixedFields();
    return v_ <=> o.v_;
  }

  std::string to_string() const { return std::to_string(v_); }

 private:
  static PrimeFieldElement raw(std::uint64_t v, std::uint64_t q) {
    PrimeFieldElement e;
    e.v_ = v;
    e.q_ = q;
    return e;
  }
  static void check_modulus(std::uint64_t q) {
    thread_local std::uint64_t last_checked = 0;
    if (q == last_checked) return;
    if (!detail::is_prime_u64(q)) throw ConfigInvalid("modulus " + std::to_string(q) + " is not prime");
    last_checked = q;
  }
  void match(const PrimeFieldElement& o) const {
    if (q_ != o.q_) throw MixedFields();
  }

  std::uint64_t v_;
  std::uint64_t q_;
};

inline PrimeFieldElement zero_like(const PrimeFieldElement& x) { return {0, x.modulus()}; }
inline PrimeFieldElement one_like(const PrimeFieldElement& x) { return {1, x.modulus()}; }
// No nontrivial involution is singled out on F_q; contraction over a prime
// field computes the bilinear pairing.
inline PrimeFieldElement conj_value(const PrimeFieldElement& x) { return x; }
inline bool is_zero(const PrimeFieldElement& x) { return x.is_zero(); }

}  // namespace pepsblend
