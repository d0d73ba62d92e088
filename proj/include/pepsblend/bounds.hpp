#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "pepsblend/errors.hpp"
#include "pepsblend/rational.hpp"

namespace pepsblend {

// High-precision nonnegative magnitude with directed rounding, used for the
// extrapolation certificates. All bound computations round outward so the
// returned value is a true upper bound of the exact expression.
class Magnitude {
 public:
  static constexpr mpfr_prec_t kPrecision = 256;

  Magnitude() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
  explicit Magnitude(double d) : Magnitude() { mpfr_set_d(v_, d, MPFR_RNDU); }
  explicit Magnitude(const Rational& r) : Magnitude() { mpfr_set_q(v_, r.mpq().get_mpq_t(), MPFR_RNDU); }
  Magnitude(const Magnitude& o) : Magnitude() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Magnitude(Magnitude&& o) noexcept : Magnitude() { mpfr_swap(v_, o.v_); }
  Magnitude& operator=(Magnitude o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Magnitude() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Magnitude mul_up(const Magnitude& o) const {
    Magnitude r;
    mpfr_mul(r.v_, v_, o.v_, MPFR_RNDU);
    return r;
  }

  bool operator<(const Magnitude& o) const { return mpfr_cmp(v_, o.v_) < 0; }
  bool operator<=(const Magnitude& o) const { return mpfr_cmp(v_, o.v_) <= 0; }

  // Exact comparison against a rational (no rounding in the compare itself).
  bool dominates(const Rational& r) const { return mpfr_cmp_q(v_, r.mpq().get_mpq_t()) >= 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDU); }
  std::string to_string() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.8Re", v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t v_;
};

// Paturi extrapolation bound: a degree-r real polynomial with |p| <= delta on
// [-eps, eps] satisfies |p(1)| <= delta * e^{2r(1 + 1/eps)}. Returned value is
// outward-rounded. The growth factor is monotone on |x| >= eps, so the same
// value also dominates |p(y)| for any |y| <= 1.
inline Magnitude paturi_growth_factor(int r, const Magnitude& eps_lower) {
  if (r < 0) throw ConfigInvalid("degree must be nonnegative");
  if (mpfr_sgn(eps_lower.raw()) <= 0) throw NonPositiveEpsilon();
  Magnitude t;
  mpfr_ui_div(t.raw(), 1, eps_lower.raw(), MPFR_RNDU);          // 1/eps, up
  mpfr_add_ui(t.raw(), t.raw(), 1, MPFR_RNDU);                  // 1 + 1/eps
  mpfr_mul_ui(t.raw(), t.raw(), static_cast<unsigned long>(2 * r), MPFR_RNDU);
  mpfr_exp(t.raw(), t.raw(), MPFR_RNDU);
  return t;
}

inline Magnitude paturi_bound(const Magnitude& delta, int r, const Rational& eps) {
  if (eps.sign() <= 0) throw NonPositiveEpsilon();
  Magnitude eps_lo;
  mpfr_set_q(eps_lo.raw(), eps.mpq().get_mpq_t(), MPFR_RNDD);
  return delta.mul_up(paturi_growth_factor(r, eps_lo));
}

inline Magnitude paturi_bound(const Rational& delta, int r, const Rational& eps) {
  if (delta.sign() < 0) throw ConfigInvalid("delta must be nonnegative");
  return paturi_bound(Magnitude(delta), r, eps);
}

// Rakhmanov-style bound for a degree-r polynomial bounded by 1 on the set of
// k equidistant points: inside radius R = sqrt(1 - r^2/k^2),
//   |p(x)| <= C log(pi / arctan((k/r) sqrt(R^2 - x^2))).
// The undetermined constant C is configuration (a diagnostic, default 1).
struct RakhmanovBound {
  Magnitude value;
  Rational radius_sq;  // R^2, exact
};

inline RakhmanovBound rakhmanov_bound_at_sq(long k, int r, const Rational& x_sq, const Rational& c) {
  if (r < 1 || k <= r) throw ConfigInvalid("rakhmanov_bound needs k > r >= 1");
  Rational radius_sq = Rational(1) - Rational(static_cast<long>(r) * r, k * k);
  if (x_sq.sign() < 0 || x_sq >= radius_sq) {
    throw PointOutsideRadius("evaluation point outside the Rakhmanov radius");
  }
  // gap = R^2 - x^2 > 0, exact; sqrt and arctan rounded down so the final
  // log rounds up to a true upper bound.
  Rational gap = radius_sq - x_sq;
  Magnitude t;
  mpfr_set_q(t.raw(), gap.mpq().get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(t.raw(), t.raw(), MPFR_RNDD);
  Magnitude ratio(Rational(k, r));
  mpfr_mul(t.raw(), t.raw(), ratio.raw(), MPFR_RNDD);
  mpfr_atan(t.raw(), t.raw(), MPFR_RNDD);
  Magnitude pi;
  mpfr_const_pi(pi.raw(), MPFR_RNDU);
  mpfr_div(t.raw(), pi.raw(), t.raw(), MPFR_RNDU);
  mpfr_log(t.raw(), t.raw(), MPFR_RNDU);
  Magnitude cm(c);
  mpfr_mul(t.raw(), t.raw(), cm.raw(), MPFR_RNDU);
  RakhmanovBound out;
  out.value = std::move(t);
  out.radius_sq = radius_sq;
  return out;
}

inline RakhmanovBound rakhmanov_bound(long k, int r, const Rational& x, const Rational& c) {
  return rakhmanov_bound_at_sq(k, r, x * x, c);
}

}  // namespace pepsblend
