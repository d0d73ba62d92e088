#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/field.hpp"

namespace pepsblend {

// Dense univariate polynomial over an exact ring, coefficients ascending.
// The zero polynomial has an empty coefficient vector; every polynomial
// carries an exemplar element so zero/one of the right field are always
// constructible (prime-field scalars need their modulus).
template <Ring R>
class Polynomial {
 public:
  explicit Polynomial(const R& like) : like_(zero_like(like)) {}

  static Polynomial zero(const R& like) { return Polynomial(like); }
  static Polynomial constant(const R& c) {
    Polynomial p(c);
    if (!pepsblend::is_zero(c)) p.c_.push_back(c);
    return p;
  }
  static Polynomial from_coeffs(std::vector<R> coeffs, const R& like) {
    Polynomial p(like);
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
  }

  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero_poly() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  const R& exemplar() const { return like_; }

  R coeff(std::size_t j) const { return j < c_.size() ? c_[j] : like_; }
  const R& leading() const { return c_.back(); }

  R operator()(const R& x) const {  // Horner
    R acc = like_;
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * x + c_[j];
    return acc;
  }

  Polynomial operator-() const {
    Polynomial p(like_);
    p.c_.reserve(c_.size());
    for (const auto& c : c_) p.c_.push_back(-c);
    return p;
  }
  Polynomial operator+(const Polynomial& o) const {
    Polynomial p(like_);
    p.c_.resize(std::max(c_.size(), o.c_.size()), like_);
    for (std::size_t j = 0; j < p.c_.size(); ++j) p.c_[j] = coeff(j) + o.coeff(j);
    p.trim();
    return p;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), like_);
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), like_);
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] -= o.c_[j];
    trim();
    return *this;
  }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial p(like_);
    if (c_.empty() || o.c_.empty()) return p;
    p.c_.assign(c_.size() + o.c_.size() - 1, like_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (std::size_t j = 0; j < o.c_.size(); ++j) p.c_[i + j] += c_[i] * o.c_[j];
    }
    p.trim();
    return p;
  }
  Polynomial operator*(const R& s) const {
    Polynomial p(like_);
    if (pepsblend::is_zero(s)) return p;
    p.c_.reserve(c_.size());
    for (const auto& c : c_) p.c_.push_back(c * s);
    p.trim();
    return p;
  }

  // multiply by (x - a)
  Polynomial shifted_root(const R& a) const {
    Polynomial p(like_);
    p.c_.assign(c_.size() + 1, like_);
    for (std::size_t j = 0; j < c_.size(); ++j) {
      p.c_[j + 1] += c_[j];
      p.c_[j] -= c_[j] * a;
    }
    p.trim();
    return p;
  }

  bool operator==(const Polynomial& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (!(c_[j] == o.c_[j])) return false;
    }
    return true;
  }

  template <typename Fn>
  auto map(Fn fn) const {
    using T = decltype(fn(like_));
    std::vector<T> out;
    out.reserve(c_.size());
    for (const auto& c : c_) out.push_back(fn(c));
    return Polynomial<T>::from_coeffs(std::move(out), fn(like_));
  }

 private:
  void trim() {
    while (!c_.empty() && pepsblend::is_zero(c_.back())) c_.pop_back();
  }

  R like_;
  std::vector<R> c_;
};

template <Ring R>
Polynomial<R> zero_like(const Polynomial<R>& p) {
  return Polynomial<R>::zero(p.exemplar());
}
template <Ring R>
Polynomial<R> one_like(const Polynomial<R>& p) {
  return Polynomial<R>::constant(one_like(p.exemplar()));
}
template <Ring R>
Polynomial<R> conj_value(const Polynomial<R>& p) {
  // Coefficient-wise; appropriate because the indeterminate ranges over real
  // blend parameters.
  return p.map([](const R& c) { return conj_value(c); });
}
template <Ring R>
bool is_zero(const Polynomial<R>& p) {
  return p.is_zero_poly();
}

// Long division over a field: returns (quotient, remainder).
template <FieldType F>
std::pair<Polynomial<F>, Polynomial<F>> divmod(const Polynomial<F>& num, const Polynomial<F>& den) {
  if (den.is_zero_poly()) throw DivisionByZero();
  Polynomial<F> q = Polynomial<F>::zero(num.exemplar());
  if (num.degree() < den.degree()) return {q, num};
  std::vector<F> rem(num.coeffs());
  std::vector<F> qc(static_cast<std::size_t>(num.degree() - den.degree()) + 1, num.exemplar() /*zero exemplar? ensure zero*/);
  for (auto& c : qc) c = zero_like(num.exemplar());
  const F inv_lead = one_like(den.leading()) / den.leading();
  for (int d = num.degree(); d >= den.degree();) {
    F factor = rem[static_cast<std::size_t>(d)] * inv_lead;
    const int shift = d - den.degree();
    qc[static_cast<std::size_t>(shift)] = factor;
    for (int j = 0; j <= den.degree(); ++j) {
      rem[static_cast<std::size_t>(shift + j)] -= factor * den.coeff(static_cast<std::size_t>(j));
    }
    while (d >= 0 && is_zero(rem[static_cast<std::size_t>(d)])) --d;
  }
  return {Polynomial<F>::from_coeffs(std::move(qc), num.exemplar()),
          Polynomial<F>::from_coeffs(std::move(rem), num.exemplar())};
}

template <FieldType F>
Polynomial<F> make_monic(const Polynomial<F>& p) {
  if (p.is_zero_poly()) return p;
  return p * (one_like(p.leading()) / p.leading());
}

template <FieldType F>
Polynomial<F> gcd_monic(Polynomial<F> a, Polynomial<F> b) {
  while (!b.is_zero_poly()) {
    auto [q, r] = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

// Unique degree < n interpolant through n points with distinct abscissae,
// via Newton divided differences (O(n^2) field operations).
template <FieldType F>
Polynomial<F> newton_interpolate(const std::vector<F>& xs, const std::vector<F>& ys) {
  const std::size_t n = xs.size();
  if (n == 0 || ys.size() != n) throw ConfigInvalid("newton_interpolate wants matching nonempty inputs");
  std::vector<F> dd(ys);
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
      if (i == level) break;
    }
  }
  Polynomial<F> p = Polynomial<F>::constant(dd[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    p = p.shifted_root(xs[i]) + Polynomial<F>::constant(dd[i]);
  }
  return p;
}

// Rational function q/p over a field, normalized so that the lowest-order
// nonzero denominator coefficient is 1.
template <FieldType F>
struct RationalFunction {
  Polynomial<F> num;
  Polynomial<F> den;

  F operator()(const F& x) const {
    F d = den(x);
    if (is_zero(d)) throw DivisionByZero();
    return num(x) / d;
  }

  void normalize() {
    if (den.is_zero_poly()) throw DegenerateSystem("rational function with zero denominator");
    std::size_t j = 0;
    while (is_zero(den.coeff(j))) ++j;
    const F inv = one_like(den.coeff(j)) / den.coeff(j);
    num = num * inv;
    den = den * inv;
  }
};

}  // namespace pepsblend
