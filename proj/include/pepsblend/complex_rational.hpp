#pragma once

#include <compare>
#include <string>

#include "pepsblend/rational.hpp"

namespace pepsblend {

// Element of Q(i): exact complex number with rational real and imaginary
// parts. Field operations are exact; conjugation is the usual involution.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
  ComplexRational(long re) : re_(re) {}  // NOLINT
  ComplexRational(Rational re) : re_(std::move(re)) {}  // NOLINT

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  ComplexRational conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  ComplexRational operator-() const { return {-re_, -im_}; }
  ComplexRational operator+(const ComplexRational& o) const { return {re_ + o.re_, im_ + o.im_}; }
  ComplexRational operator-(const ComplexRational& o) const { return {re_ - o.re_, im_ - o.im_}; }
  ComplexRational operator*(const ComplexRational& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
  }
  ComplexRational operator/(const ComplexRational& o) const {
    Rational n2 = o.norm2();
    if (n2.is_zero()) throw DivisionByZero();
    ComplexRational num = *this * o.conj();
    return {num.re_ / n2, num.im_ / n2};
  }
  ComplexRational& operator+=(const ComplexRational& o) { re_ += o.re_; im_ += o.im_; return *this; }
  ComplexRational& operator-=(const ComplexRational& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  ComplexRational& operator*=(const ComplexRational& o) { *this = *this * o; return *this; }

  bool operator==(const ComplexRational& o) const { return re_ == o.re_ && im_ == o.im_; }
  // Lexicographic; used only for deterministic containers (majority tallies),
  // not as an algebraic order.
  std::strong_ordering operator<=>(const ComplexRational& o) const {
    auto c = re_ <=> o.re_;
    return c != 0 ? c : im_ <=> o.im_;
  }

  std::string to_string() const { return re_.to_string() + (im_.sign() >= 0 ? "+" : "") + im_.to_string() + "i"; }

 private:
  Rational re_;
  Rational im_;
};

inline ComplexRational zero_like(const ComplexRational&) { return {}; }
inline ComplexRational one_like(const ComplexRational&) { return ComplexRational(1); }
inline ComplexRational conj_value(const ComplexRational& z) { return z.conj(); }
inline bool is_zero(const ComplexRational& z) { return z.is_zero(); }

}  // namespace pepsblend
