#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "pepsblend/complex_rational.hpp"
#include "pepsblend/errors.hpp"
#include "pepsblend/prime_field.hpp"
#include "pepsblend/sampling.hpp"

namespace pepsblend {

// Failure model for the simulated contraction machine. The hypothetical
// machine is adversarially unspecified on failures; the modes here cover the
// benign i.i.d. regime, an exact-count adversarial regime for probing the
// decoding radius, and bounded additive noise for the noisy reduction.
struct OraclePolicy {
  enum class Mode { AlwaysCorrect, IidFailure, AdversarialSubset, AdditiveNoise };
  Mode mode = Mode::AlwaysCorrect;
  double failure_probability = 0.0;  // IidFailure
  double subset_fraction = 0.0;      // AdversarialSubset: exact share per window
  std::size_t subset_window = 0;     // AdversarialSubset: queries per window (a repeat's k)
  unsigned noise_bits = 64;          // AdditiveNoise: |answer - truth| <= 2^-bits
  std::uint64_t seed = 0;

  void validate() const {
    if (failure_probability < 0 || failure_probability > 1) {
      throw ConfigInvalid("failure probability must lie in [0, 1]");
    }
    if (mode == Mode::AdversarialSubset) {
      if (subset_fraction < 0 || subset_fraction > 1) throw ConfigInvalid("subset fraction must lie in [0, 1]");
      if (subset_window == 0) throw ConfigInvalid("adversarial-subset mode needs the query window size");
    }
    if (mode == Mode::AdditiveNoise && noise_bits < 1) throw ConfigInvalid("noise bits must be positive");
  }

  const char* mode_name() const {
    switch (mode) {
      case Mode::AlwaysCorrect: return "always-correct";
      case Mode::IidFailure: return "iid-failure";
      case Mode::AdversarialSubset: return "adversarial-subset";
      case Mode::AdditiveNoise: return "additive-noise";
    }
    return "?";
  }
};

namespace detail {

// Wrong answer on failure: truth plus a uniformly drawn nonzero offset.
inline ComplexRational wrong_offset(const ComplexRational&, Rng& rng) {
  while (true) {
    Rational re = snap_to_dyadic(rng.uniform_symmetric(), 16);
    Rational im = snap_to_dyadic(rng.uniform_symmetric(), 16);
    if (!(re.is_zero() && im.is_zero())) return {std::move(re), std::move(im)};
  }
}

inline PrimeFieldElement wrong_offset(const PrimeFieldElement& like, Rng& rng) {
  return {rng.below(like.modulus() - 1) + 1, like.modulus()};
}

// Real additive noise with |noise| <= 2^-bits, exact dyadic.
inline ComplexRational additive_noise(const ComplexRational&, unsigned bits, Rng& rng) {
  const std::int64_t m = static_cast<std::int64_t>(rng.next_u64() >> 12) - (1LL << 51);  // [-2^51, 2^51)
  mpz_class num(static_cast<long>(m));
  return ComplexRational(Rational::dyadic(num, bits + 51));
}

inline PrimeFieldElement additive_noise(const PrimeFieldElement& like, unsigned, Rng&) {
  // No meaningful bounded noise on a finite field; keep answers exact.
  return {0, like.modulus()};
}

}  // namespace detail

template <FieldType F>
struct QueryOutcome {
  F answer;
  bool corrupted = false;
};

// Applies the failure model to a window of true answers (one reduction
// repeat). Deterministic given the rng state.
template <FieldType F>
std::vector<QueryOutcome<F>> apply_policy(const std::vector<F>& truths, const OraclePolicy& policy, Rng& rng) {
  policy.validate();
  std::vector<QueryOutcome<F>> out;
  out.reserve(truths.size());
  switch (policy.mode) {
    case OraclePolicy::Mode::AlwaysCorrect:
      for (const auto& t : truths) out.push_back({t, false});
      break;
    case OraclePolicy::Mode::IidFailure:
      for (const auto& t : truths) {
        if (rng.bernoulli(policy.failure_probability)) {
          out.push_back({t + detail::wrong_offset(t, rng), true});
        } else {
          out.push_back({t, false});
        }
      }
      break;
    case OraclePolicy::Mode::AdversarialSubset: {
      const std::size_t k = truths.size();
      std::size_t bad = static_cast<std::size_t>(policy.subset_fraction * static_cast<double>(k) + 0.999999);
      if (bad > k) bad = k;
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      for (std::size_t i = 0; i < bad; ++i) std::swap(idx[i], idx[i + rng.below(k - i)]);
      std::vector<bool> corrupt(k, false);
      for (std::size_t i = 0; i < bad; ++i) corrupt[idx[i]] = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (corrupt[i]) {
          out.push_back({truths[i] + detail::wrong_offset(truths[i], rng), true});
        } else {
          out.push_back({truths[i], false});
        }
      }
      break;
    }
    case OraclePolicy::Mode::AdditiveNoise:
      for (const auto& t : truths) {
        out.push_back({t + detail::additive_noise(t, policy.noise_bits, rng), false});
      }
      break;
  }
  return out;
}

// Instance-level faulty oracle wrapping an exact engine: the simulated
// machine answers one query per call. Adversarial-subset mode corrupts an
// exact share of each consecutive window of `subset_window` queries.
template <typename Instance, FieldType F>
std::function<F(const Instance&)> make_faulty_oracle(std::function<F(const Instance&)> engine,
                                                     const OraclePolicy& policy) {
  policy.validate();
  struct State {
    Rng rng;
    OraclePolicy policy;
    std::size_t window_pos = 0;
    std::vector<bool> window_corrupt;
    explicit State(const OraclePolicy& p) : rng(p.seed), policy(p) {}
  };
  auto state = std::make_shared<State>(policy);
  return [engine, state](const Instance& inst) -> F {
    F truth = engine(inst);
    auto& st = *state;
    switch (st.policy.mode) {
      case OraclePolicy::Mode::AlwaysCorrect:
        return truth;
      case OraclePolicy::Mode::IidFailure:
        if (st.rng.bernoulli(st.policy.failure_probability)) {
          return truth + detail::wrong_offset(truth, st.rng);
        }
        return truth;
      case OraclePolicy::Mode::AdditiveNoise:
        return truth + detail::additive_noise(truth, st.policy.noise_bits, st.rng);
      case OraclePolicy::Mode::AdversarialSubset: {
        if (st.window_pos == 0) {
          const std::size_t k = st.policy.subset_window;
          std::size_t bad = static_cast<std::size_t>(st.policy.subset_fraction * static_cast<double>(k) + 0.999999);
          if (bad > k) bad = k;
          std::vector<std::size_t> idx(k);
          for (std::size_t i = 0; i < k; ++i) idx[i] = i;
          for (std::size_t i = 0; i < bad; ++i) std::swap(idx[i], idx[i + st.rng.below(k - i)]);
          st.window_corrupt.assign(k, false);
          for (std::size_t i = 0; i < bad; ++i) st.window_corrupt[idx[i]] = true;
        }
        const bool bad_query = st.window_corrupt[st.window_pos];
        st.window_pos = (st.window_pos + 1) % st.policy.subset_window;
        if (bad_query) return truth + detail::wrong_offset(truth, st.rng);
        return truth;
      }
    }
    return truth;
  };
}

}  // namespace pepsblend
