#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/field.hpp"
#include "pepsblend/linalg.hpp"
#include "pepsblend/modular.hpp"
#include "pepsblend/polynomial.hpp"

namespace pepsblend {

template <FieldType F>
struct Sample {
  F x;
  F y;
};

// Pairwise-distinct abscissae are an invariant of every recovery routine.
template <FieldType F>
using SampleSet = std::vector<Sample<F>>;

template <FieldType F>
void require_distinct(const SampleSet<F>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i].x == s[j].x) throw DuplicateAbscissa();
    }
  }
}

// Number of samples a returned polynomial must reproduce. This is the
// Berlekamp-Welch promise threshold max(r+1, ceil((k+r)/2)).
inline std::size_t agreement_threshold(std::size_t k, int r) {
  std::size_t half_up = (k + static_cast<std::size_t>(r) + 1) / 2;
  return std::max(static_cast<std::size_t>(r) + 1, half_up);
}

template <FieldType F>
std::size_t count_agreements(const Polynomial<F>& q, const SampleSet<F>& s) {
  std::size_t n = 0;
  for (const auto& p : s) {
    if (q(p.x) == p.y) ++n;
  }
  return n;
}

// Unique degree <= r polynomial through the first r+1 samples, recovered by
// solving the Vandermonde system exactly.
template <FieldType F>
Polynomial<F> vandermonde_interpolate(const SampleSet<F>& samples, int r) {
  if (r < 0) throw ConfigInvalid("degree bound must be nonnegative");
  const std::size_t need = static_cast<std::size_t>(r) + 1;
  if (samples.size() < need) throw InsufficientSamples("need at least r+1 samples");
  require_distinct(samples);
  const F zero = zero_like(samples[0].x);
  Matrix<F> vand(need, need, zero);
  std::vector<F> rhs;
  rhs.reserve(need);
  for (std::size_t i = 0; i < need; ++i) {
    F p = one_like(samples[i].x);
    for (std::size_t j = 0; j < need; ++j) {
      vand.at(i, j) = p;
      p = p * samples[i].x;
    }
    rhs.push_back(samples[i].y);
  }
  auto coeffs = solve_linear_system(vand, rhs);
  return Polynomial<F>::from_coeffs(std::move(coeffs), zero);
}

enum class DecodeRoute { Auto, LinearSystem, Euclidean };

namespace detail {

// Error-locator route: find a nonzero solution of the homogeneous system
//   E(x_i) y_i - Q(x_i) = 0,  deg E <= e, deg Q <= r + e,  e = floor((k-r)/2),
// then divide Q by E exactly. The column count exceeds the row count, so a
// kernel vector always exists; whether it yields a consistent polynomial is
// exactly the decodability question.
//
// Boundary case: when k - r is even and the error count equals e exactly, the
// solution space also contains pairs with Q - qE proportional to the
// agreement-set polynomial (degree r + e, so inside the cap), and an
// arbitrary kernel vector can be such a mixture. Below the boundary the
// vanishing count k - errors strictly exceeds r + e, which forces Q = qE for
// every kernel element. The rescue drops one point at a time: k-1 - r is
// odd, whose system is mixture-free, and dropping any corrupted point leaves
// the remaining errors within the reduced radius.
template <FieldType F>
Polynomial<F> bw_linear(const SampleSet<F>& samples, int r, bool allow_rescue = true) {
  const std::size_t k = samples.size();
  const std::size_t e = (k - static_cast<std::size_t>(r)) / 2;
  const F zero = zero_like(samples[0].x);
  const std::size_t cols = (e + 1) + (static_cast<std::size_t>(r) + e + 1);
  Matrix<F> m(k, cols, zero);
  for (std::size_t i = 0; i < k; ++i) {
    F p = one_like(samples[i].x);
    for (std::size_t j = 0; j <= e; ++j) {
      m.at(i, j) = samples[i].y * p;
      p = p * samples[i].x;
    }
    p = one_like(samples[i].x);
    for (std::size_t l = 0; l <= static_cast<std::size_t>(r) + e; ++l) {
      m.at(i, e + 1 + l) = -p;
      p = p * samples[i].x;
    }
  }
  auto attempt = [&]() -> Polynomial<F> {
    auto v = kernel_vector(std::move(m));
    if (!v) throw DecodingFailure("error-locator system has trivial kernel");
    std::vector<F> ec(v->begin(), v->begin() + static_cast<std::ptrdiff_t>(e + 1));
    std::vector<F> qc(v->begin() + static_cast<std::ptrdiff_t>(e + 1), v->end());
    auto locator = Polynomial<F>::from_coeffs(std::move(ec), zero);
    auto qtimes = Polynomial<F>::from_coeffs(std::move(qc), zero);
    if (locator.is_zero_poly()) throw DecodingFailure("degenerate error locator");
    auto [q, rem] = divmod(qtimes, locator);
    if (!rem.is_zero_poly()) throw DecodingFailure("locator division leaves a remainder");
    if (q.degree() > r) throw DecodingFailure("quotient exceeds the degree bound");
    return q;
  };
  const std::size_t tau = agreement_threshold(k, r);
  try {
    auto q = attempt();
    if (count_agreements(q, samples) < tau) {
      throw DecodingFailure("promise violated: too few samples on the decoded polynomial",
                            DecodingFailure::Kind::PromiseViolated);
    }
    return q;
  } catch (const DecodingFailure& f) {
    if (f.kind == DecodingFailure::Kind::PromiseViolated) throw;
    const bool even_boundary = ((k - static_cast<std::size_t>(r)) % 2) == 0 && e > 0;
    // The drop-one sweep is complete but costs k sub-decodes; beyond the
    // exact-decision size it would be spent almost surely on undecodable
    // inputs, so the boundary stays best-effort there (failure, never a
    // wrong answer).
    if (!allow_rescue || !even_boundary || k > 64) throw;
  }
  for (std::size_t drop = 0; drop < k; ++drop) {
    SampleSet<F> sub;
    sub.reserve(k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      if (i != drop) sub.push_back(samples[i]);
    }
    try {
      auto q = bw_linear(sub, r, false);
      if (count_agreements(q, samples) >= tau) return q;
    } catch (const DecodingFailure&) {
    }
  }
  throw DecodingFailure("no consistent polynomial at the decoding-radius boundary");
}

// Euclidean route (Gao): interpolate through all points, then run the
// extended Euclidean algorithm against prod(x - x_i) down to degree
// floor((k+r)/2); the Bezout coefficient is the error locator. Guaranteed for
// error counts up to floor((k-r-1)/2); the linear route covers the remaining
// boundary case.
template <FieldType F>
Polynomial<F> bw_euclid(const SampleSet<F>& samples, int r) {
  const std::size_t k = samples.size();
  const F zero = zero_like(samples[0].x);
  std::vector<F> xs, ys;
  xs.reserve(k);
  ys.reserve(k);
  for (const auto& s : samples) {
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  Polynomial<F> marker = Polynomial<F>::constant(one_like(zero));
  for (const auto& x : xs) marker = marker.shifted_root(x);
  Polynomial<F> interp = newton_interpolate(xs, ys);

  const int stop = (static_cast<int>(k) + r) / 2;
  Polynomial<F> r0 = marker, r1 = interp;
  Polynomial<F> t0 = Polynomial<F>::zero(zero), t1 = Polynomial<F>::constant(one_like(zero));
  while (!r1.is_zero_poly() && r1.degree() > stop) {
    auto [quot, rem] = divmod(r0, r1);
    Polynomial<F> tn = t0 - quot * t1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(tn);
    if (!r1.is_zero_poly()) {
      // Monic normalization keeps the remainder sequence canonical and tames
      // coefficient growth over fraction fields.
      const F scale = one_like(r1.leading()) / r1.leading();
      r1 = r1 * scale;
      t1 = t1 * scale;
    }
  }
  Polynomial<F> q(zero);
  if (interp.is_zero_poly()) {
    // all samples zero: the zero polynomial is the candidate
  } else if (r1.is_zero_poly()) {
    throw DecodingFailure("euclidean remainder sequence collapsed");
  } else {
    if (t1.is_zero_poly()) throw DecodingFailure("euclidean decode collapsed");
    auto [cand, rem] = divmod(r1, t1);
    if (!rem.is_zero_poly()) throw DecodingFailure("euclidean division leaves a remainder");
    if (cand.degree() > r) throw DecodingFailure("quotient exceeds the degree bound");
    q = std::move(cand);
  }
  if (count_agreements(q, samples) < agreement_threshold(k, r)) {
    throw DecodingFailure("promise violated: too few samples on the decoded polynomial",
                          DecodingFailure::Kind::PromiseViolated);
  }
  return q;
}

inline Polynomial<ComplexRational> bw_modular(const SampleSet<ComplexRational>& samples, int r);

}  // namespace detail

// Berlekamp-Welch decoding over any field: given k > r samples of which at
// least max(r+1, ceil((k+r)/2)) lie on a degree <= r polynomial, recovers that
// polynomial exactly; otherwise throws DecodingFailure. A returned polynomial
// always satisfies the agreement threshold, so a silent wrong answer is
// impossible. Auto picks a fast route per field and falls back to the
// error-locator linear system, which is authoritative.
template <FieldType F>
Polynomial<F> berlekamp_welch(const SampleSet<F>& samples, int r, DecodeRoute route = DecodeRoute::Auto) {
  if (r < 0) throw ConfigInvalid("degree bound must be nonnegative");
  if (samples.size() <= static_cast<std::size_t>(r)) {
    throw InsufficientSamples("berlekamp_welch needs k > r samples");
  }
  require_distinct(samples);
  switch (route) {
    case DecodeRoute::LinearSystem:
      return detail::bw_linear(samples, r);
    case DecodeRoute::Euclidean:
      return detail::bw_euclid(samples, r);
    case DecodeRoute::Auto:
      break;
  }
  if constexpr (std::same_as<F, ComplexRational>) {
    return detail::bw_modular(samples, r);
  } else {
    try {
      return detail::bw_euclid(samples, r);
    } catch (const DecodingFailure& f) {
      if (f.kind == DecodingFailure::Kind::PromiseViolated) throw;
      return detail::bw_linear(samples, r);
    }
  }
}

// Exact recovery of a rational function q/p with deg q, deg p <= r from at
// least 2r+1 exact samples: one nonzero kernel vector of the homogeneous
// system q(x_i) - y_i p(x_i) = 0, reduced by the polynomial gcd and verified
// against every sample. No error tolerance: a single wrong sample surfaces as
// DegenerateSystem rather than a quietly wrong function.
template <FieldType F>
RationalFunction<F> reconstruct_rational(const SampleSet<F>& samples, int r) {
  if (r < 0) throw ConfigInvalid("degree bound must be nonnegative");
  const std::size_t k = samples.size();
  if (k < 2 * static_cast<std::size_t>(r) + 1) {
    throw InsufficientSamples("reconstruct_rational needs at least 2r+1 samples");
  }
  require_distinct(samples);
  const F zero = zero_like(samples[0].x);
  const std::size_t w = static_cast<std::size_t>(r) + 1;
  Matrix<F> m(k, 2 * w, zero);
  for (std::size_t i = 0; i < k; ++i) {
    F p = one_like(samples[i].x);
    for (std::size_t j = 0; j < w; ++j) {
      m.at(i, j) = p;
      m.at(i, w + j) = -(samples[i].y * p);
      p = p * samples[i].x;
    }
  }
  auto v = kernel_vector(std::move(m));
  if (!v) throw DegenerateSystem("samples admit no rational function of the given degree");
  auto num = Polynomial<F>::from_coeffs(std::vector<F>(v->begin(), v->begin() + static_cast<std::ptrdiff_t>(w)), zero);
  auto den = Polynomial<F>::from_coeffs(std::vector<F>(v->begin() + static_cast<std::ptrdiff_t>(w), v->end()), zero);
  if (den.is_zero_poly()) throw DegenerateSystem("denominator forced to zero");
  auto g = gcd_monic(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  for (const auto& s : samples) {
    F d = den(s.x);
    if (is_zero(d)) throw DegenerateSystem("reconstruction has a pole at a sample point");
    if (!(num(s.x) == s.y * d)) throw DegenerateSystem("reconstruction misses a sample");
  }
  RationalFunction<F> f{std::move(num), std::move(den)};
  f.normalize();
  return f;
}

namespace detail {

// Exact Q(i) decoding through word-size homomorphic images. All rational data
// is scaled to Gaussian integers once (substituting u = M x clears abscissa
// denominators without changing degrees); decoding then happens per prime in
// F_p[i] with the generic routes above, coefficients are CRT-lifted, and the
// lift is verified with exact integer arithmetic. Verification makes wrong
// lifts impossible; unlucky primes only trigger escalation. Declaring failure
// is exact for k <= 64 (full fallback) and evidence-based beyond that, with
// two independent prime images required per promise-violation verdict.
inline Polynomial<ComplexRational> bw_modular(const SampleSet<ComplexRational>& samples, int r) {
  const std::size_t k = samples.size();
  const std::size_t tau = agreement_threshold(k, r);
  const std::size_t w = static_cast<std::size_t>(r) + 1;

  mpz_class absc_den = 1, value_den = 1;
  for (const auto& s : samples) {
    absc_den = lcm_denominator(s.x, absc_den);
    value_den = lcm_denominator(s.y, value_den);
  }
  std::vector<GaussianInt> xs, ys;
  xs.reserve(k);
  ys.reserve(k);
  std::size_t x_bits = 1, y_bits = 1;
  for (const auto& s : samples) {
    xs.push_back(scale_to_integer(s.x, absc_den));
    ys.push_back(scale_to_integer(s.y, value_den));
    x_bits = std::max({x_bits, mpz_sizeinbase(xs.back().re.get_mpz_t(), 2), mpz_sizeinbase(xs.back().im.get_mpz_t(), 2)});
    y_bits = std::max({y_bits, mpz_sizeinbase(ys.back().re.get_mpz_t(), 2), mpz_sizeinbase(ys.back().im.get_mpz_t(), 2)});
  }

  // Convert a scaled-coordinate candidate with Gaussian-integer coefficients
  // back to original coordinates: q(x) = Qhat(M x) / D.
  auto unscale = [&](const std::vector<GaussianInt>& qhat) {
    std::vector<ComplexRational> cs;
    cs.reserve(qhat.size());
    mpz_class mpow = 1;
    for (std::size_t j = 0; j < qhat.size(); ++j) {
      mpz_class scaled_den = value_den;  // coefficient j: qhat_j * M^j / D
      ComplexRational c{Rational(qhat[j].re * mpow, scaled_den), Rational(qhat[j].im * mpow, scaled_den)};
      cs.push_back(std::move(c));
      mpow *= absc_den;
    }
    return Polynomial<ComplexRational>::from_coeffs(std::move(cs), ComplexRational());
  };

  // Exact agreement count for an integer-coefficient candidate, evaluated
  // with a scaled Horner: compare den_scale * Yhat_i against qnum(X_i).
  auto integer_agreements = [&](const std::vector<GaussianInt>& qnum, const mpz_class& den_scale) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < k; ++i) {
      GaussianInt acc;
      for (std::size_t j = qnum.size(); j-- > 0;) {
        GaussianInt next;
        next.add_mul(acc, xs[i]);
        acc = next + qnum[j];
      }
      GaussianInt target{ys[i].re * den_scale, ys[i].im * den_scale};
      if (acc == target) ++hits;
    }
    return hits;
  };

  std::size_t want_primes = std::clamp<std::size_t>((y_bits + (x_bits + 8) * static_cast<std::size_t>(std::max(r, 1))) / 61 + 2, 3, 48);
  constexpr std::size_t kPrimeCap = 220;
  constexpr std::size_t kExactFallbackCap = 64;

  std::vector<CrtAccumulator> crt_re(w), crt_im(w);
  std::vector<mpz_class> prev_re(w), prev_im(w);
  bool have_prev = false;
  std::size_t used = 0, structural = 0, promise = 0, prime_index = 0;
  bool sticky_linear = false;

  // The error-locator route is authoritative and, at these sizes, cheaper
  // than an exact Euclidean pass over Q(i).
  auto exact_fallback = [&]() -> Polynomial<ComplexRational> { return bw_linear(samples, r); };

  while (prime_index < kPrimeCap) {
    FpiContext ctx{imaging_prime(prime_index++)};
    SampleSet<FpiElem> reduced;
    reduced.reserve(k);
    bool collision = false;
    for (std::size_t i = 0; i < k && !collision; ++i) {
      FpiElem x = reduce_gaussian(xs[i], &ctx);
      for (std::size_t j = 0; j < i; ++j) {
        if (reduced[j].x == x) {
          collision = true;
          break;
        }
      }
      if (!collision) reduced.push_back({x, reduce_gaussian(ys[i], &ctx)});
    }
    if (collision) continue;  // abscissae collide in this image only

    std::optional<Polynomial<FpiElem>> image;
    try {
      image = sticky_linear ? bw_linear(reduced, r) : bw_euclid(reduced, r);
    } catch (const DecodingFailure& f) {
      DecodingFailure::Kind kind = f.kind;
      if (kind == DecodingFailure::Kind::Structural && !sticky_linear && structural == 0) {
        // One linear probe covers the radius-boundary case Gao cannot reach.
        try {
          image = bw_linear(reduced, r);
          sticky_linear = true;
        } catch (const DecodingFailure& g) {
          kind = g.kind;
        }
      }
      if (!image) {
        if (kind == DecodingFailure::Kind::PromiseViolated) {
          if (++promise >= 2) {
            if (k <= kExactFallbackCap) return exact_fallback();
            throw DecodingFailure("promise violated in two independent prime images",
                                  DecodingFailure::Kind::PromiseViolated);
          }
        } else if (++structural >= 4) {
          break;
        }
        continue;
      }
    }

    for (std::size_t j = 0; j < w; ++j) {
      FpiElem c = j < image->coeffs().size() ? image->coeffs()[j] : zero_like(reduced[0].x);
      crt_re[j].add_residue(c.re, ctx.p);
      crt_im[j].add_residue(c.im, ctx.p);
    }
    ++used;

    if (used < want_primes) continue;
    std::vector<mpz_class> lift_re(w), lift_im(w);
    for (std::size_t j = 0; j < w; ++j) {
      lift_re[j] = crt_re[j].lift();
      lift_im[j] = crt_im[j].lift();
    }
    const bool stable = have_prev && lift_re == prev_re && lift_im == prev_im;
    prev_re = lift_re;
    prev_im = lift_im;
    have_prev = true;
    if (!stable && used > want_primes) continue;

    // Attempt an integral interpretation first; fall back to coefficient-wise
    // rational reconstruction when the fitted polynomial is not integral in
    // the scaled coordinates.
    std::vector<GaussianInt> qhat(w);
    for (std::size_t j = 0; j < w; ++j) qhat[j] = {lift_re[j], lift_im[j]};
    if (integer_agreements(qhat, 1) >= tau) return unscale(qhat);

    bool rational_ok = true;
    std::vector<ComplexRational> qrat(w);
    for (std::size_t j = 0; j < w && rational_ok; ++j) {
      auto re = rational_reconstruct(lift_re[j], crt_re[j].modulus());
      auto im = rational_reconstruct(lift_im[j], crt_im[j].modulus());
      if (!re || !im) rational_ok = false;
      else qrat[j] = {*re, *im};
    }
    if (rational_ok) {
      mpz_class extra = 1;
      for (const auto& c : qrat) extra = lcm_denominator(c, extra);
      std::vector<GaussianInt> qnum(w);
      for (std::size_t j = 0; j < w; ++j) qnum[j] = scale_to_integer(qrat[j], extra);
      if (integer_agreements(qnum, extra) >= tau) {
        // q(x) coefficients: (qrat_j * M^j) / D.
        std::vector<ComplexRational> cs(w);
        mpz_class mpow = 1;
        for (std::size_t j = 0; j < w; ++j) {
          cs[j] = ComplexRational{Rational(qnum[j].re * mpow, extra * value_den),
                                  Rational(qnum[j].im * mpow, extra * value_den)};
          mpow *= absc_den;
        }
        return Polynomial<ComplexRational>::from_coeffs(std::move(cs), ComplexRational());
      }
    }

    if (stable) {
      // The images agree and still miss the threshold: with two stable rounds
      // this is a promise violation, not a lifting artifact.
      if (++promise >= 2) {
        if (k <= kExactFallbackCap) return exact_fallback();
        throw DecodingFailure("stable lift misses the agreement threshold",
                              DecodingFailure::Kind::PromiseViolated);
      }
    }
    want_primes = want_primes * 8 / 5 + 2;
  }

  if (k <= kExactFallbackCap) return exact_fallback();
  throw DecodingFailure("no consistent decode across prime images");
}

}  // namespace detail

}  // namespace pepsblend
