#pragma once

#include <compare>
#include <string>
#include <variant>

#include "pepsblend/complex_rational.hpp"
#include "pepsblend/prime_field.hpp"

namespace pepsblend {

// The algebraic customization points are the free functions zero_like /
// one_like / conj_value / is_zero, found by ADL. Every scalar the library
// computes with carries enough context to answer them (the prime field
// element carries its modulus), so algorithms never need a separate field
// descriptor.

template <typename R>
concept Ring = requires(const R& a, const R& b) {
  { a + b } -> std::convertible_to<R>;
  { a - b } -> std::convertible_to<R>;
  { a* b } -> std::convertible_to<R>;
  { -a } -> std::convertible_to<R>;
  { zero_like(a) } -> std::convertible_to<R>;
  { one_like(a) } -> std::convertible_to<R>;
  { conj_value(a) } -> std::convertible_to<R>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
};

template <typename F>
concept FieldType = Ring<F> && requires(const F& a, const F& b) {
  { a / b } -> std::convertible_to<F>;
};

// Runtime-tagged scalar for the serialization and CLI boundary. Any one
// computation is homogeneous; mixing alternatives throws MixedFields.
class FieldScalar {
 public:
  using Storage = std::variant<ComplexRational, PrimeFieldElement>;

  FieldScalar() : v_(ComplexRational()) {}
  FieldScalar(ComplexRational z) : v_(std::move(z)) {}      // NOLINT
  FieldScalar(PrimeFieldElement x) : v_(std::move(x)) {}    // NOLINT

  bool is_complex() const { return std::holds_alternative<ComplexRational>(v_); }
  bool is_prime() const { return std::holds_alternative<PrimeFieldElement>(v_); }
  const ComplexRational& complex() const {
    if (!is_complex()) throw MixedFields("expected a complex-rational scalar");
    return std::get<ComplexRational>(v_);
  }
  const PrimeFieldElement& prime() const {
    if (!is_prime()) throw MixedFields("expected a prime-field scalar");
    return std::get<PrimeFieldElement>(v_);
  }

  bool is_zero() const {
    return std::visit([](const auto& x) { return x.is_zero(); }, v_);
  }

  FieldScalar operator-() const {
    return std::visit([](const auto& x) { return FieldScalar(-x); }, v_);
  }
  FieldScalar operator+(const FieldScalar& o) const { return apply(o, [](const auto& a, const auto& b) { return a + b; }); }
  FieldScalar operator-(const FieldScalar& o) const { return apply(o, [](const auto& a, const auto& b) { return a - b; }); }
  FieldScalar operator*(const FieldScalar& o) const { return apply(o, [](const auto& a, const auto& b) { return a * b; }); }
  FieldScalar operator/(const FieldScalar& o) const { return apply(o, [](const auto& a, const auto& b) { return a / b; }); }
  FieldScalar& operator+=(const FieldScalar& o) { *this = *this + o; return *this; }
  FieldScalar& operator-=(const FieldScalar& o) { *this = *this - o; return *this; }
  FieldScalar& operator*=(const FieldScalar& o) { *this = *this * o; return *this; }

  bool operator==(const FieldScalar& o) const {
    return apply_bool(o, [](const auto& a, const auto& b) { return a == b; });
  }
  std::strong_ordering operator<=>(const FieldScalar& o) const {
    if (v_.index() != o.v_.index()) throw MixedFields();
    if (is_complex()) return complex() <=> o.complex();
    return prime() <=> o.prime();
  }

  FieldScalar conj() const {
    return std::visit([](const auto& x) { return FieldScalar(conj_value(x)); }, v_);
  }

  std::string to_string() const {
    return std::visit([](const auto& x) { return x.to_string(); }, v_);
  }

 private:
  template <typename Fn>
  FieldScalar apply(const FieldScalar& o, Fn fn) const {
    if (v_.index() != o.v_.index()) throw MixedFields();
    if (is_complex()) return FieldScalar(fn(complex(), o.complex()));
    return FieldScalar(fn(prime(), o.prime()));
  }
  template <typename Fn>
  bool apply_bool(const FieldScalar& o, Fn fn) const {
    if (v_.index() != o.v_.index()) throw MixedFields();
    if (is_complex()) return fn(complex(), o.complex());
    return fn(prime(), o.prime());
  }

  Storage v_;
};

inline FieldScalar zero_like(const FieldScalar& x) {
  if (x.is_complex()) return FieldScalar(ComplexRational());
  return FieldScalar(PrimeFieldElement(0, x.prime().modulus()));
}
inline FieldScalar one_like(const FieldScalar& x) {
  if (x.is_complex()) return FieldScalar(ComplexRational(1));
  return FieldScalar(PrimeFieldElement(1, x.prime().modulus()));
}
inline FieldScalar conj_value(const FieldScalar& x) { return x.conj(); }
inline bool is_zero(const FieldScalar& x) { return x.is_zero(); }

static_assert(FieldType<ComplexRational>);
static_assert(FieldType<PrimeFieldElement>);
static_assert(FieldType<FieldScalar>);
static_assert(FieldType<Rational>);

}  // namespace pepsblend
