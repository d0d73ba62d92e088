#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pepsblend/contraction.hpp"
#include "pepsblend/interpolate.hpp"
#include "pepsblend/peps.hpp"
#include "pepsblend/polynomial.hpp"
#include "pepsblend/rational.hpp"

namespace pepsblend {

// Blend path R(t) = t P + (1-t) Q in the PEPS-data vector space: the affine
// combination acts entry-wise on the site tensors, not on the induced states.
template <Ring R>
struct BlendPath {
  PepsData<R> target;   // P, reached at t = 1
  PepsData<R> random;   // Q, the instance at t = 0

  void validate() const {
    target.validate();
    random.validate();
    if (!target.same_shape(random)) throw ShapeMismatch("blend endpoints must have identical shape");
  }
};

template <FieldType F>
PepsData<F> blend(const BlendPath<F>& path, const F& t) {
  path.validate();
  PepsData<F> out = path.random;
  const F one = one_like(t);
  const F s = one - t;
  for (std::size_t v = 0; v < out.tensors.size(); ++v) {
    for (std::size_t i = 0; i < out.tensors[v].size(); ++i) {
      out.tensors[v][i] = t * path.target.tensors[v][i] + s * path.random.tensors[v][i];
    }
  }
  out.translation_invariant = path.target.translation_invariant && path.random.translation_invariant;
  return out;
}

inline PepsData<ComplexRational> blend(const BlendPath<ComplexRational>& path, const Rational& t) {
  return blend(path, ComplexRational(t));
}

// The theorem's parameter choices: delta = 1/(12N) and eps = delta/(6 D^4 d N),
// exactly as rationals.
struct EpsilonChoice {
  Rational delta;
  Rational eps;
};

inline EpsilonChoice epsilon_for(std::size_t D, std::size_t d, std::size_t N) {
  if (D < 1 || d < 1 || N < 1) throw ConfigInvalid("epsilon_for needs positive D, d, N");
  Rational delta(1, mpz_class(12u * static_cast<unsigned long>(N)));
  mpz_class denom = mpz_class(static_cast<unsigned long>(D));
  denom = denom * denom * denom * denom;
  denom *= static_cast<unsigned long>(6);
  denom *= static_cast<unsigned long>(d);
  denom *= static_cast<unsigned long>(N);
  Rational eps = delta / Rational(denom);
  return {delta, eps};
}

enum class SampleVariant { Exact, Noisy };

// Sample abscissae on the blend parameter. The noisy variant uses exactly the
// k equidistant points in [0, eps] (endpoints included); the exact variant
// uses t_i = i eps / k for i = 1..k, all distinct and away from t = 0 so that
// every queried instance mixes target and mask.
inline std::vector<Rational> choose_sample_points(SampleVariant variant, std::size_t k, const Rational& eps) {
  if (k < 1) throw ConfigInvalid("need at least one sample point");
  if (eps.sign() <= 0) throw NonPositiveEpsilon();
  std::vector<Rational> pts;
  pts.reserve(k);
  if (variant == SampleVariant::Noisy) {
    if (k == 1) {
      pts.push_back(Rational(0));
      return pts;
    }
    for (std::size_t i = 0; i < k; ++i) {
      pts.push_back(eps * Rational(static_cast<long>(i), static_cast<long>(k - 1)));
    }
  } else {
    for (std::size_t i = 1; i <= k; ++i) {
      pts.push_back(eps * Rational(static_cast<long>(i), static_cast<long>(k)));
    }
  }
  return pts;
}

// --- symbolic contraction along the path --------------------------------

// Entries of R(t) are degree-1 polynomials in t. Clearing the per-vertex
// denominators once turns them into Z[i][t] polynomials, and the ring-generic
// sweep then produces the whole contraction polynomial q(t) = <psi(t)|psi(t)>
// in a single pass: one exact object answering every sample point. Degree
// is at most 2N.
namespace detail {

struct ScaledPathPeps {
  PepsData<Polynomial<GaussianInt>> data;
  mpz_class scale_sq = 1;
};

inline ScaledPathPeps scale_blend_path(const BlendPath<ComplexRational>& path) {
  path.validate();
  ScaledPathPeps out;
  out.data.lattice = path.target.lattice;
  out.data.d = path.target.d;
  out.data.D = path.target.D;
  out.data.tensors.resize(path.target.tensors.size());
  for (std::size_t v = 0; v < path.target.tensors.size(); ++v) {
    mpz_class den = 1;
    for (const auto& z : path.target.tensors[v]) den = lcm_denominator(z, den);
    for (const auto& z : path.random.tensors[v]) den = lcm_denominator(z, den);
    std::vector<Polynomial<GaussianInt>> t;
    t.reserve(path.target.tensors[v].size());
    for (std::size_t i = 0; i < path.target.tensors[v].size(); ++i) {
      GaussianInt p = scale_to_integer(path.target.tensors[v][i], den);
      GaussianInt q = scale_to_integer(path.random.tensors[v][i], den);
      // q + (p - q) t
      t.push_back(Polynomial<GaussianInt>::from_coeffs({q, p - q}, GaussianInt()));
    }
    out.data.tensors[v] = std::move(t);
    out.scale_sq *= den;
    out.scale_sq *= den;
  }
  return out;
}

inline Polynomial<ComplexRational> unscale_poly(const Polynomial<GaussianInt>& p, const mpz_class& scale) {
  return p.map([&](const GaussianInt& c) { return c.over(scale); });
}

}  // namespace detail

// q(t) = <psi(t)|psi(t)> as an exact polynomial in the blend parameter.
inline Polynomial<ComplexRational> contraction_polynomial(const BlendPath<ComplexRational>& path,
                                                          const ContractionCaps& caps = {}) {
  auto scaled = detail::scale_blend_path(path);
  auto poly = detail::contract_doubled(scaled.data, {}, caps);
  return detail::unscale_poly(poly, scaled.scale_sq);
}

// q_A(t) = <psi(t)|A|psi(t)> as an exact polynomial in the blend parameter.
inline Polynomial<ComplexRational> uev_polynomial(const BlendPath<ComplexRational>& path,
                                                  const LocalObservable<ComplexRational>& obs,
                                                  const ContractionCaps& caps = {}) {
  path.validate();
  obs.validate(path.target.lattice, path.target.d);
  auto scaled = detail::scale_blend_path(path);
  auto [ints, obs_den] = detail::scale_matrix(obs.matrix);
  std::vector<Polynomial<GaussianInt>> weights;
  weights.reserve(ints.size());
  for (auto& w : ints) weights.push_back(Polynomial<GaussianInt>::constant(w));
  auto poly = detail::contract_uev_impl(scaled.data, obs, path.target.d, weights, caps);
  return detail::unscale_poly(poly, scaled.scale_sq * obs_den);
}

inline ComplexRational eval_poly_at_rational(const Polynomial<ComplexRational>& q, const Rational& t) {
  return q(ComplexRational(t));
}

}  // namespace pepsblend
