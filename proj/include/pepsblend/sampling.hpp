#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pepsblend/complex_rational.hpp"
#include "pepsblend/peps.hpp"
#include "pepsblend/rational.hpp"

namespace pepsblend {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic splittable RNG. Derived streams are independent of the order
// in which sibling streams are consumed, which keeps parallel trials and
// repeats reproducible from one master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    for (int i = 0; i < 2; ++i) detail::splitmix64(state_);
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x517cc1b727220a95ULL * (index + 1));
    return detail::splitmix64(s);
  }
  Rng split(std::uint64_t index) const { return Rng(derive(state_, index)); }

  // uniform in (0, 1], 53 significant bits
  double uniform_unit() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1p-53; }

  // uniform in [-1, 1)
  double uniform_symmetric() { return static_cast<double>(next_u64() >> 11) * 0x1p-52 - 1.0; }

  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform_unit() <= p; }

  // Standard normal via Box-Muller; consumes two words per draw so the
  // stream stays aligned regardless of caller mix.
  double standard_normal() {
    double u1 = uniform_unit();
    double u2 = static_cast<double>(next_u64() >> 11) * 0x1p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t state_;
};

// Entry-wise instance distribution: the complex Gaussian N_C(0, sigma) (each
// real component an independent N(0, sigma)) or the uniform distribution
// truncated at threshold sigma, both snapped to the dyadic grid with `bits`
// fractional bits. The snap realizes the finite-precision sampling model
// concretely while keeping all downstream algebra exact.
struct DistributionSpec {
  enum class Kind { Gaussian, Uniform };
  Kind kind = Kind::Gaussian;
  Rational sigma = Rational(1);
  unsigned bits = 53;
  bool translation_invariant = false;

  void validate() const {
    if (sigma.sign() <= 0) throw ConfigInvalid("sigma must be positive");
    if (bits < 1) throw ConfigInvalid("dyadic precision must be at least one bit");
  }

  std::string kind_name() const { return kind == Kind::Gaussian ? "gaussian" : "uniform"; }
};

inline Rational sample_real(const DistributionSpec& spec, Rng& rng) {
  const double s = spec.sigma.to_double();
  double v = spec.kind == DistributionSpec::Kind::Gaussian ? rng.standard_normal() * s
                                                           : rng.uniform_symmetric() * s;
  return snap_to_dyadic(v, spec.bits);
}

inline ComplexRational sample_complex(const DistributionSpec& spec, Rng& rng) {
  Rational re = sample_real(spec, rng);
  Rational im = sample_real(spec, rng);
  return {std::move(re), std::move(im)};
}

// Fresh random PEPS-data with the shape of `shape`. Translation-invariant
// sampling draws one tensor per vertex degree and replicates it, mirroring
// the shared-Q construction for translation-invariant targets.
inline PepsData<ComplexRational> sample_peps_data(const PepsData<ComplexRational>& shape,
                                                  const DistributionSpec& spec, Rng& rng) {
  spec.validate();
  PepsData<ComplexRational> out;
  out.lattice = shape.lattice;
  out.d = shape.d;
  out.D = shape.D;
  out.translation_invariant = spec.translation_invariant;
  out.tensors.resize(shape.tensors.size());
  if (spec.translation_invariant) {
    std::map<int, std::vector<ComplexRational>> per_degree;
    for (std::size_t y = 0; y < shape.lattice.height; ++y) {
      for (std::size_t x = 0; x < shape.lattice.width; ++x) {
        const int deg = shape.lattice.degree(x, y);
        auto it = per_degree.find(deg);
        if (it == per_degree.end()) {
          std::vector<ComplexRational> t(shape.tensor_size(x, y));
          for (auto& z : t) z = sample_complex(spec, rng);
          it = per_degree.emplace(deg, std::move(t)).first;
        }
        out.tensors[shape.lattice.vertex(x, y)] = it->second;
      }
    }
  } else {
    for (std::size_t y = 0; y < shape.lattice.height; ++y) {
      for (std::size_t x = 0; x < shape.lattice.width; ++x) {
        std::vector<ComplexRational> t(shape.tensor_size(x, y));
        for (auto& z : t) z = sample_complex(spec, rng);
        out.tensors[shape.lattice.vertex(x, y)] = std::move(t);
      }
    }
  }
  return out;
}

// Shape-only template for generated instances.
inline PepsData<ComplexRational> empty_peps(const LatticeSpec& lattice, std::size_t d, std::size_t D) {
  PepsData<ComplexRational> peps;
  peps.lattice = lattice;
  peps.d = d;
  peps.D = D;
  peps.tensors.resize(lattice.vertices());
  for (std::size_t y = 0; y < lattice.height; ++y) {
    for (std::size_t x = 0; x < lattice.width; ++x) {
      peps.tensors[lattice.vertex(x, y)].assign(peps.tensor_size(x, y), ComplexRational());
    }
  }
  return peps;
}

}  // namespace pepsblend
