#pragma once

#include <cstddef>
#include <vector>

#include "pepsblend/field.hpp"
#include "pepsblend/lattice.hpp"

namespace pepsblend {

// PEPS-data: the family of site tensors specifying a (generally unnormalized)
// PEPS, as opposed to the state it induces. Entry layout per vertex is
// normative and shared with the JSON format: flat index with the physical
// index slowest, then the present virtual legs in Up, Right, Down, Left
// order, each of dimension D, row-major.
template <Ring R>
struct PepsData {
  LatticeSpec lattice;
  std::size_t d = 1;
  std::size_t D = 1;
  bool translation_invariant = false;
  std::vector<std::vector<R>> tensors;

  std::size_t tensor_size(std::size_t x, std::size_t y) const {
    std::size_t n = d;
    for (int i = 0; i < lattice.degree(x, y); ++i) n *= D;
    return n;
  }

  void validate() const {
    lattice.validate();
    if (d < 1 || D < 1) throw ConfigInvalid("physical and bond dimensions must be positive");
    if (tensors.size() != lattice.vertices()) {
      throw ShapeMismatch("tensor count does not match the vertex count");
    }
    for (std::size_t y = 0; y < lattice.height; ++y) {
      for (std::size_t x = 0; x < lattice.width; ++x) {
        if (tensors[lattice.vertex(x, y)].size() != tensor_size(x, y)) {
          throw ShapeMismatch("tensor entries do not match the vertex degree");
        }
      }
    }
  }

  bool same_shape(const PepsData& o) const {
    return lattice.width == o.lattice.width && lattice.height == o.lattice.height && d == o.d && D == o.D;
  }
};

// Translation invariance of PEPS-data on an open-boundary lattice: all
// tensors of equal degree carry identical entry arrays.
template <Ring R>
bool is_translation_invariant_data(const PepsData<R>& peps) {
  std::vector<int> seen_degree;
  std::vector<const std::vector<R>*> representative(5, nullptr);
  for (std::size_t y = 0; y < peps.lattice.height; ++y) {
    for (std::size_t x = 0; x < peps.lattice.width; ++x) {
      int deg = peps.lattice.degree(x, y);
      const auto& t = peps.tensors[peps.lattice.vertex(x, y)];
      if (!representative[static_cast<std::size_t>(deg)]) {
        representative[static_cast<std::size_t>(deg)] = &t;
      } else if (*representative[static_cast<std::size_t>(deg)] != t) {
        return false;
      }
    }
  }
  return true;
}

// Local observable acting on at most two sites; matrix is d^|support| square,
// row-major, bra multi-index slowest (support order as listed).
template <FieldType F>
struct LocalObservable {
  std::vector<std::size_t> support;
  std::vector<F> matrix;

  std::size_t dim(std::size_t d) const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < support.size(); ++i) n *= d;
    return n;
  }

  void validate(const LatticeSpec& lattice, std::size_t d) const {
    if (support.empty() || support.size() > 2) {
      throw ConfigInvalid("observable support must contain one or two sites");
    }
    for (auto v : support) {
      if (v >= lattice.vertices()) throw SupportOutOfRange("observable support outside the lattice");
    }
    if (support.size() == 2 && support[0] == support[1]) {
      throw ConfigInvalid("observable support vertices must be distinct");
    }
    const std::size_t n = dim(d);
    if (matrix.size() != n * n) throw ShapeMismatch("observable matrix must be d^|support| square");
  }
};

template <FieldType F>
LocalObservable<F> identity_observable(std::size_t site, std::size_t d, const F& like) {
  LocalObservable<F> obs;
  obs.support = {site};
  obs.matrix.assign(d * d, zero_like(like));
  for (std::size_t s = 0; s < d; ++s) obs.matrix[s * d + s] = one_like(like);
  return obs;
}

// Translation-invariant open-boundary MPS with two D x D matrices and
// boundary vector |0> on both ends.
template <Ring R>
struct MpsData {
  std::size_t n = 1;
  std::size_t D = 1;
  std::vector<R> a0;  // D x D row-major
  std::vector<R> a1;

  void validate() const {
    if (n < 1 || D < 1) throw ConfigInvalid("MPS length and bond dimension must be positive");
    if (a0.size() != D * D || a1.size() != D * D) throw ShapeMismatch("MPS matrices must be D x D");
  }
};

// The MPS as a 1 x n column of PEPS-data (d = 2), with the boundary vectors
// absorbed into the end tensors. Used to cross-check the two engines.
template <FieldType F>
PepsData<F> mps_as_peps(const MpsData<F>& mps) {
  mps.validate();
  const F zero = zero_like(mps.a0.empty() ? F() : mps.a0[0]);
  PepsData<F> peps;
  peps.lattice = LatticeSpec{1, mps.n};
  peps.d = 2;
  peps.D = mps.D;
  peps.tensors.resize(mps.n);
  const std::size_t D = mps.D;
  auto mat = [&](std::size_t s) -> const std::vector<F>& { return s == 0 ? mps.a0 : mps.a1; };
  for (std::size_t y = 0; y < mps.n; ++y) {
    const bool has_up = y > 0;
    const bool has_down = y + 1 < mps.n;
    std::size_t size = 2;
    if (has_up) size *= D;
    if (has_down) size *= D;
    std::vector<F> t(size, zero);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t up = 0; up < (has_up ? D : 1); ++up) {
        for (std::size_t down = 0; down < (has_down ? D : 1); ++down) {
          std::size_t row = has_up ? up : 0;      // |0> boundary at the top
          std::size_t col = has_down ? down : 0;  // <0| dual at the bottom
          std::size_t idx = s;
          if (has_up) idx = idx * D + up;
          if (has_down) idx = idx * D + down;
          t[idx] = mat(s)[row * D + col];
        }
      }
    }
    peps.tensors[y] = std::move(t);
  }
  return peps;
}

// Cluster-state PEPS-data with D = 2, d = 2 and entries in {0, +-1}: each
// edge is oriented rightward/downward; the tail site copies its physical
// index onto the virtual leg and the head site applies the controlled phase
// (-1)^{leg * s}. Contracting an edge pair then yields (-1)^{s_u s_v}, the
// controlled-Z phase of the textbook construction on |+>^N (global scale
// omitted).
template <FieldType F>
PepsData<F> build_cluster_peps(const LatticeSpec& lattice, const F& like) {
  lattice.validate();
  const F zero = zero_like(like);
  const F one = one_like(like);
  PepsData<F> peps;
  peps.lattice = lattice;
  peps.d = 2;
  peps.D = 2;
  peps.tensors.resize(lattice.vertices());
  for (std::size_t y = 0; y < lattice.height; ++y) {
    for (std::size_t x = 0; x < lattice.width; ++x) {
      std::vector<Leg> legs;
      for (Leg l : kLegOrder) {
        if (lattice.has_leg(x, y, l)) legs.push_back(l);
      }
      const std::size_t size = 2u << legs.size();  // d * D^deg with d = D = 2
      std::vector<F> t(size, zero);
      const std::size_t combos = size / 2;
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t c = 0; c < combos; ++c) {
          bool nonzero = true;
          bool negative = false;
          for (std::size_t li = 0; li < legs.size(); ++li) {
            const std::size_t bit = (c >> (legs.size() - 1 - li)) & 1u;
            if (legs[li] == Leg::Right || legs[li] == Leg::Down) {
              if (bit != s) { nonzero = false; break; }   // tail: copy
            } else if (bit == 1 && s == 1) {
              negative = !negative;                        // head: phase
            }
          }
          if (nonzero) t[s * combos + c] = negative ? -one : one;
        }
      }
      peps.tensors[lattice.vertex(x, y)] = std::move(t);
    }
  }
  return peps;
}

}  // namespace pepsblend
