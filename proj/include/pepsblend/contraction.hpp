#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/field.hpp"
#include "pepsblend/gaussian_integer.hpp"
#include "pepsblend/peps.hpp"

namespace pepsblend {

// Exact contraction is exponential by nature; the caps make that explicit
// instead of ever truncating. The doubled-layer sweep runs row by row, so its
// boundary object has (D^2)^width entries: exponential in the width only.
struct ContractionCaps {
  std::size_t max_width = 6;
  std::size_t max_dense = std::size_t(1) << 22;
};

namespace detail {

// Doubled (bra-ket) site tensor in a full four-leg layout, absent legs kept
// as dimension-1 axes: index = ((e_up * dr + e_right) * dd + e_down) * dl +
// e_left with e = ket_leg * D + bra_leg. `weight` is an optional d x d matrix
// (bra index slowest) inserted between the layers; identity when null.
template <Ring R>
std::vector<R> doubled_site(const PepsData<R>& peps, std::size_t x, std::size_t y,
                            const std::vector<R>* weight) {
  const auto& lat = peps.lattice;
  const auto& t = peps.tensors[lat.vertex(x, y)];
  const std::size_t D = peps.D;
  const std::size_t E = D * D;
  std::vector<Leg> legs;
  for (Leg l : kLegOrder) {
    if (lat.has_leg(x, y, l)) legs.push_back(l);
  }
  std::size_t vsize = 1;
  for (std::size_t i = 0; i < legs.size(); ++i) vsize *= D;
  std::size_t dims[4] = {1, 1, 1, 1};
  for (Leg l : legs) dims[static_cast<int>(l)] = E;
  const R zero = zero_like(t[0]);
  std::vector<R> out(dims[0] * dims[1] * dims[2] * dims[3], zero);

  for (std::size_t sk = 0; sk < peps.d; ++sk) {
    for (std::size_t sb = 0; sb < peps.d; ++sb) {
      R w = zero;
      if (weight) {
        w = (*weight)[sb * peps.d + sk];
        if (is_zero(w)) continue;
      } else if (sb != sk) {
        continue;
      }
      for (std::size_t kv = 0; kv < vsize; ++kv) {
        const R& ket = t[sk * vsize + kv];
        if (is_zero(ket)) continue;
        for (std::size_t bv = 0; bv < vsize; ++bv) {
          const R& bra = t[sb * vsize + bv];
          if (is_zero(bra)) continue;
          std::size_t pair[4] = {0, 0, 0, 0};
          std::size_t kk = kv, bb = bv;
          for (std::size_t li = legs.size(); li-- > 0;) {
            pair[static_cast<int>(legs[li])] = (kk % D) * D + (bb % D);
            kk /= D;
            bb /= D;
          }
          const std::size_t idx = ((pair[0] * dims[1] + pair[1]) * dims[2] + pair[2]) * dims[3] + pair[3];
          R contrib = ket * conj_value(bra);
          if (weight) contrib = contrib * w;
          out[idx] += contrib;
        }
      }
    }
  }
  return out;
}

// Row sweep of the doubled network. The running object is indexed by
// [emitted down-bonds][open horizontal bond][not-yet-consumed up-bonds].
template <Ring R>
R contract_doubled(const PepsData<R>& peps, const std::map<std::size_t, std::vector<R>>& weights,
                   const ContractionCaps& caps) {
  peps.validate();
  const auto& lat = peps.lattice;
  if (lat.width > caps.max_width) {
    throw SizeCapExceeded("lattice width " + std::to_string(lat.width) + " exceeds the contraction cap " +
                          std::to_string(caps.max_width));
  }
  const std::size_t E = peps.D * peps.D;
  const R zero = zero_like(peps.tensors[0][0]);
  std::vector<R> bnd{one_like(zero)};
  for (std::size_t y = 0; y < lat.height; ++y) {
    const std::size_t udim = y > 0 ? E : 1;
    const std::size_t ddim = y + 1 < lat.height ? E : 1;
    std::vector<R> cur = std::move(bnd);
    std::size_t dpart = 1;
    std::size_t hold = 1;
    for (std::size_t x = 0; x < lat.width; ++x) {
      const std::size_t rdim = x + 1 < lat.width ? E : 1;
      auto w_it = weights.find(lat.vertex(x, y));
      const auto site = doubled_site(peps, x, y, w_it == weights.end() ? nullptr : &w_it->second);
      const std::size_t upart = cur.size() / (dpart * hold * udim);
      std::vector<R> next(dpart * ddim * rdim * upart, zero);
      for (std::size_t dp = 0; dp < dpart; ++dp) {
        for (std::size_t ho = 0; ho < hold; ++ho) {
          for (std::size_t ux = 0; ux < udim; ++ux) {
            const std::size_t cur_base = ((dp * hold + ho) * udim + ux) * upart;
            for (std::size_t r = 0; r < rdim; ++r) {
              for (std::size_t dd = 0; dd < ddim; ++dd) {
                const R& tv = site[((ux * rdim + r) * ddim + dd) * hold + ho];
                if (is_zero(tv)) continue;
                const std::size_t next_base = ((dp * ddim + dd) * rdim + r) * upart;
                for (std::size_t up = 0; up < upart; ++up) {
                  const R& cv = cur[cur_base + up];
                  if (is_zero(cv)) continue;
                  next[next_base + up] += cv * tv;
                }
              }
            }
          }
        }
      }
      cur = std::move(next);
      dpart *= ddim;
      hold = rdim;
    }
    bnd = std::move(cur);
  }
  return bnd[0];
}

// Scaled copy of rational PEPS-data: per-vertex common denominators are
// cleared so that the sweep runs on Gaussian integers; the contraction value
// is divided by prod(scale_v)^2 afterwards (each vertex enters bra and ket).
struct ScaledPeps {
  PepsData<GaussianInt> data;
  mpz_class scale_sq = 1;
};

inline ScaledPeps scale_peps(const PepsData<ComplexRational>& peps) {
  ScaledPeps out;
  out.data.lattice = peps.lattice;
  out.data.d = peps.d;
  out.data.D = peps.D;
  out.data.translation_invariant = peps.translation_invariant;
  out.data.tensors.reserve(peps.tensors.size());
  for (const auto& t : peps.tensors) {
    mpz_class den = 1;
    for (const auto& z : t) den = lcm_denominator(z, den);
    std::vector<GaussianInt> scaled;
    scaled.reserve(t.size());
    for (const auto& z : t) scaled.push_back(scale_to_integer(z, den));
    out.data.tensors.push_back(std::move(scaled));
    out.scale_sq *= den;
    out.scale_sq *= den;
  }
  return out;
}

// Scaled observable weights for the two-site operator-sum: the observable
// matrix is cleared to integers once and its denominator divided out at the
// end together with the tensor scales.
inline std::pair<std::vector<GaussianInt>, mpz_class> scale_matrix(const std::vector<ComplexRational>& m) {
  mpz_class den = 1;
  for (const auto& z : m) den = lcm_denominator(z, den);
  std::vector<GaussianInt> out;
  out.reserve(m.size());
  for (const auto& z : m) out.push_back(scale_to_integer(z, den));
  return {std::move(out), den};
}

}  // namespace detail

// --- contract_norm -----------------------------------------------------

// <psi|psi> for PEPS-data over any exact field (bilinear pairing when the
// field has no involution). Over Q(i) this is real and nonnegative.
template <FieldType F>
F contract_norm(const PepsData<F>& peps, const ContractionCaps& caps = {}) {
  return detail::contract_doubled(peps, {}, caps);
}

inline ComplexRational contract_norm(const PepsData<ComplexRational>& peps, const ContractionCaps& caps = {}) {
  auto scaled = detail::scale_peps(peps);
  GaussianInt z = detail::contract_doubled(scaled.data, {}, caps);
  return z.over(scaled.scale_sq);
}

// --- contract_uev ------------------------------------------------------

namespace detail {

// Operator-sum plan for a <= 2-site observable: a list of (site -> weight
// matrix) insertions whose results add up to <psi|A|psi>.
template <FieldType F, Ring R>
R contract_uev_impl(const PepsData<R>& data, const LocalObservable<F>& obs, std::size_t d,
                    const std::vector<R>& weight_matrix, const ContractionCaps& caps) {
  const R zero = zero_like(data.tensors[0][0]);
  if (obs.support.size() == 1) {
    std::map<std::size_t, std::vector<R>> weights;
    weights[obs.support[0]] = weight_matrix;
    return contract_doubled(data, weights, caps);
  }
  // Two sites v, w: sum over the bra/ket pair at v of selector insertions,
  // with the matching d x d slice of the observable inserted at w.
  R acc = zero;
  for (std::size_t sbv = 0; sbv < d; ++sbv) {
    for (std::size_t skv = 0; skv < d; ++skv) {
      std::vector<R> slice(d * d, zero);
      bool any = false;
      for (std::size_t sbw = 0; sbw < d; ++sbw) {
        for (std::size_t skw = 0; skw < d; ++skw) {
          const std::size_t row = sbv * d + sbw;
          const std::size_t col = skv * d + skw;
          const R val = weight_matrix[row * d * d + col];
          if (!is_zero(val)) any = true;
          slice[sbw * d + skw] = val;
        }
      }
      if (!any) continue;
      std::vector<R> selector(d * d, zero);
      selector[sbv * d + skv] = one_like(zero);
      std::map<std::size_t, std::vector<R>> weights;
      weights[obs.support[0]] = std::move(selector);
      weights[obs.support[1]] = std::move(slice);
      acc += contract_doubled(data, weights, caps);
    }
  }
  return acc;
}

}  // namespace detail

// Unnormalized expectation value <psi|A|psi> of a local observable.
template <FieldType F>
F contract_uev(const PepsData<F>& peps, const LocalObservable<F>& obs, const ContractionCaps& caps = {}) {
  peps.validate();
  obs.validate(peps.lattice, peps.d);
  return detail::contract_uev_impl(peps, obs, peps.d, obs.matrix, caps);
}

inline ComplexRational contract_uev(const PepsData<ComplexRational>& peps, const LocalObservable<ComplexRational>& obs,
                                    const ContractionCaps& caps = {}) {
  peps.validate();
  obs.validate(peps.lattice, peps.d);
  auto scaled = detail::scale_peps(peps);
  auto [weights, obs_den] = detail::scale_matrix(obs.matrix);
  GaussianInt z = detail::contract_uev_impl(scaled.data, obs, peps.d, weights, caps);
  return z.over(scaled.scale_sq * obs_den);
}

// --- contract_nev ------------------------------------------------------

// Normalized expectation value <psi|A|psi> / <psi|psi>.
template <FieldType F>
F contract_nev(const PepsData<F>& peps, const LocalObservable<F>& obs, const ContractionCaps& caps = {}) {
  F norm = contract_norm(peps, caps);
  if (is_zero(norm)) throw ZeroNorm();
  return contract_uev(peps, obs, caps) / norm;
}

inline ComplexRational contract_nev(const PepsData<ComplexRational>& peps, const LocalObservable<ComplexRational>& obs,
                                    const ContractionCaps& caps = {}) {
  ComplexRational norm = contract_norm(peps, caps);
  if (norm.is_zero()) throw ZeroNorm();
  return contract_uev(peps, obs, caps) / norm;
}

// --- build_state_vector ------------------------------------------------

// Dense amplitude vector of the PEPS, physical index of vertex 0 slowest
// (row-major over vertices). Single-layer row sweep keeping the processed
// physical indices open; refuses to build anything beyond the dense cap.
template <FieldType F>
std::vector<F> build_state_vector(const PepsData<F>& peps, const ContractionCaps& caps = {}) {
  peps.validate();
  const auto& lat = peps.lattice;
  if (lat.width > caps.max_width) throw SizeCapExceeded("lattice width exceeds the contraction cap");
  std::size_t dense = 1;
  for (std::size_t v = 0; v < lat.vertices(); ++v) {
    dense *= peps.d;
    if (dense > caps.max_dense) throw SizeCapExceeded("d^N exceeds the dense-state cap");
  }
  const std::size_t D = peps.D;
  const F zero = zero_like(peps.tensors[0][0]);
  std::vector<F> bnd{one_like(zero)};
  std::size_t amps = 1;
  for (std::size_t y = 0; y < lat.height; ++y) {
    const std::size_t udim = y > 0 ? D : 1;
    const std::size_t ddim = y + 1 < lat.height ? D : 1;
    std::vector<F> cur = std::move(bnd);
    std::size_t dpart = 1;
    std::size_t hold = 1;
    for (std::size_t x = 0; x < lat.width; ++x) {
      const std::size_t rdim = x + 1 < lat.width ? D : 1;
      const auto& t = peps.tensors[lat.vertex(x, y)];
      std::vector<Leg> legs;
      for (Leg l : kLegOrder) {
        if (lat.has_leg(x, y, l)) legs.push_back(l);
      }
      std::size_t vsize = 1;
      for (std::size_t i = 0; i < legs.size(); ++i) vsize *= D;
      const std::size_t upart = cur.size() / (amps * dpart * hold * udim);
      std::vector<F> next(amps * peps.d * dpart * ddim * rdim * upart, zero);
      for (std::size_t a = 0; a < amps; ++a) {
        for (std::size_t dp = 0; dp < dpart; ++dp) {
          for (std::size_t ho = 0; ho < hold; ++ho) {
            for (std::size_t ux = 0; ux < udim; ++ux) {
              const std::size_t cur_base = (((a * dpart + dp) * hold + ho) * udim + ux) * upart;
              for (std::size_t s = 0; s < peps.d; ++s) {
                for (std::size_t r = 0; r < rdim; ++r) {
                  for (std::size_t dd = 0; dd < ddim; ++dd) {
                    // entry P[s; legs] with the present legs drawn from
                    // (ux, r, dd, ho) in normative order
                    std::size_t vidx = 0;
                    for (Leg l : legs) {
                      std::size_t digit = 0;
                      switch (l) {
                        case Leg::Up: digit = ux; break;
                        case Leg::Right: digit = r; break;
                        case Leg::Down: digit = dd; break;
                        case Leg::Left: digit = ho; break;
                      }
                      vidx = vidx * D + digit;
                    }
                    const F& tv = t[s * vsize + vidx];
                    if (is_zero(tv)) continue;
                    const std::size_t next_base = ((((a * peps.d + s) * dpart + dp) * ddim + dd) * rdim + r) * upart;
                    for (std::size_t up = 0; up < upart; ++up) {
                      const F& cv = cur[cur_base + up];
                      if (is_zero(cv)) continue;
                      next[next_base + up] += cv * tv;
                    }
                  }
                }
              }
            }
          }
        }
      }
      cur = std::move(next);
      amps *= peps.d;
      dpart *= ddim;
      hold = rdim;
    }
    bnd = std::move(cur);
  }
  return bnd;
}

// --- mps_transfer_norm -------------------------------------------------

// <0| E^n |0> with the transfer operator E = A0 (x) conj(A0) + A1 (x)
// conj(A1), by exact repeated application to the doubled boundary vector.
template <FieldType F>
F mps_transfer_norm(const MpsData<F>& mps) {
  mps.validate();
  const std::size_t D = mps.D;
  const std::size_t E = D * D;
  const F zero = zero_like(mps.a0[0]);
  std::vector<F> transfer(E * E, zero);
  for (const auto* m : {&mps.a0, &mps.a1}) {
    for (std::size_t a = 0; a < D; ++a) {
      for (std::size_t b = 0; b < D; ++b) {
        for (std::size_t c = 0; c < D; ++c) {
          for (std::size_t e = 0; e < D; ++e) {
            transfer[(a * D + b) * E + (c * D + e)] += (*m)[a * D + c] * conj_value((*m)[b * D + e]);
          }
        }
      }
    }
  }
  std::vector<F> v(E, zero);
  v[0] = one_like(zero);
  for (std::size_t step = 0; step < mps.n; ++step) {
    std::vector<F> next(E, zero);
    for (std::size_t i = 0; i < E; ++i) {
      for (std::size_t j = 0; j < E; ++j) {
        if (is_zero(transfer[i * E + j]) || is_zero(v[j])) continue;
        next[i] += transfer[i * E + j] * v[j];
      }
    }
    v = std::move(next);
  }
  return v[0];
}

}  // namespace pepsblend
