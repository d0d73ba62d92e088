#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pepsblend/blend.hpp"
#include "pepsblend/bounds.hpp"
#include "pepsblend/contraction.hpp"
#include "pepsblend/interpolate.hpp"
#include "pepsblend/majority.hpp"
#include "pepsblend/oracle.hpp"
#include "pepsblend/sampling.hpp"

namespace pepsblend {

enum class ReductionVariant { Exact, Uev, Nev, Noisy };

inline const char* variant_name(ReductionVariant v) {
  switch (v) {
    case ReductionVariant::Exact: return "exact";
    case ReductionVariant::Uev: return "uev";
    case ReductionVariant::Nev: return "nev";
    case ReductionVariant::Noisy: return "noisy";
  }
  return "?";
}

struct ReductionConfig {
  ReductionVariant variant = ReductionVariant::Exact;
  std::size_t k = 0;        // 0 = variant default: 10r (exact/uev), 4N+1 (nev), r+1 (noisy)
  std::size_t repeats = 25;
  unsigned noise_bits = 128;          // noisy variant certificate input
  Rational rakhmanov_c = Rational(1); // diagnostic constant
  bool early_stop = true;             // stop once the majority cannot change
  bool pointwise_engine = false;      // contract every query individually
  ContractionCaps caps;
};

struct RepeatRecord {
  std::uint64_t seed = 0;
  std::size_t correct_answers = 0;
  bool decoded = false;
  std::string failure;
  std::optional<ComplexRational> candidate;
};

struct ReductionReport {
  std::string variant;
  std::size_t width = 0, height = 0, n_vertices = 0, d = 0, D = 0;
  int degree = 0;
  std::size_t k = 0;
  std::size_t repeats_requested = 0;
  std::size_t repeats_executed = 0;
  Rational delta, eps;
  std::vector<Rational> points;
  std::vector<RepeatRecord> repeats;
  std::optional<Polynomial<ComplexRational>> recovered;
  std::optional<ComplexRational> value;
  bool success = false;
  std::string outcome;  // ok | majority-tie | all-repeats-failed
  std::optional<std::string> bound_decimal;
  std::uint64_t master_seed = 0;
};

struct ReductionResult {
  ComplexRational value;
  ReductionReport report;
};

struct NoisyReductionResult {
  ComplexRational value;
  Magnitude bound;
  ReductionReport report;
};

namespace detail {

inline std::size_t default_k(ReductionVariant variant, std::size_t N) {
  const std::size_t r = 2 * N;
  switch (variant) {
    case ReductionVariant::Exact:
    case ReductionVariant::Uev: return 10 * r;
    case ReductionVariant::Nev: return 2 * r + 1;  // 4N+1
    case ReductionVariant::Noisy: return r + 1;
  }
  return 10 * r;
}

}  // namespace detail

// Worst-to-average reduction for the contraction value (and the unnormalized
// expectation value when an observable is given): per repeat, draw fresh
// random PEPS-data Q, query the faulty oracle at k blend points in [0, eps],
// Berlekamp-Welch-decode the degree <= 2N polynomial and evaluate the
// candidate at t = 1; the final answer is the most frequent candidate under
// exact equality. Ties and all-repeats-failed are reported, never broken
// silently.
inline ReductionResult reduce_exact(const PepsData<ComplexRational>& target,
                                    const std::optional<LocalObservable<ComplexRational>>& obs,
                                    const DistributionSpec& dist, const OraclePolicy& policy,
                                    const ReductionConfig& cfg, std::uint64_t seed) {
  target.validate();
  dist.validate();
  policy.validate();
  const std::size_t N = target.lattice.vertices();
  const int r = static_cast<int>(2 * N);
  const std::size_t k = cfg.k ? cfg.k : detail::default_k(cfg.variant, N);
  if (k <= static_cast<std::size_t>(r)) throw ConfigInvalid("reduction needs k > 2N sample points");

  auto [delta, eps] = epsilon_for(target.D, target.d, N);
  auto points = choose_sample_points(SampleVariant::Exact, k, eps);

  ReductionReport report;
  report.variant = obs ? "uev" : "exact";
  report.width = target.lattice.width;
  report.height = target.lattice.height;
  report.n_vertices = N;
  report.d = target.d;
  report.D = target.D;
  report.degree = r;
  report.k = k;
  report.repeats_requested = cfg.repeats;
  report.delta = delta;
  report.eps = eps;
  report.points = points;
  report.master_seed = seed;

  MajorityVote<ComplexRational> vote(cfg.repeats);
  std::map<ComplexRational, Polynomial<ComplexRational>> recovered_by_value;

  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    RepeatRecord rec;
    rec.seed = Rng::derive(seed, rep);
    Rng rng(rec.seed);
    auto mask = sample_peps_data(target, dist, rng);
    BlendPath<ComplexRational> path{target, mask};

    std::vector<ComplexRational> truths;
    truths.reserve(k);
    if (cfg.pointwise_engine) {
      for (const auto& t : points) {
        auto inst = blend(path, t);
        truths.push_back(obs ? contract_uev(inst, *obs, cfg.caps) : contract_norm(inst, cfg.caps));
      }
    } else {
      auto qp = obs ? uev_polynomial(path, *obs, cfg.caps) : contraction_polynomial(path, cfg.caps);
      for (const auto& t : points) truths.push_back(qp(ComplexRational(t)));
    }

    auto outcomes = apply_policy(truths, policy, rng);
    SampleSet<ComplexRational> samples;
    samples.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      samples.push_back({ComplexRational(points[i]), outcomes[i].answer});
      if (outcomes[i].answer == truths[i]) ++rec.correct_answers;
    }

    try {
      auto decoded = berlekamp_welch(samples, r);
      ComplexRational candidate = decoded(ComplexRational(Rational(1)));
      rec.decoded = true;
      rec.candidate = candidate;
      recovered_by_value.emplace(candidate, std::move(decoded));
      vote.add(candidate);
    } catch (const DecodingFailure& f) {
      rec.failure = f.what();
      vote.add_failure();
    }
    report.repeats.push_back(std::move(rec));
    report.repeats_executed = rep + 1;
    if (cfg.early_stop && vote.settled()) break;
  }

  auto [value, tie] = vote.winner();
  if (tie) {
    report.outcome = "majority-tie";
    throw MajorityTie("majority vote tied between exact candidate values");
  }
  report.outcome = "ok";
  report.value = value;
  report.success = true;
  auto it = recovered_by_value.find(value);
  if (it != recovered_by_value.end()) report.recovered = it->second;
  return {value, std::move(report)};
}

inline ReductionResult reduce_exact(const PepsData<ComplexRational>& target, const DistributionSpec& dist,
                                    const OraclePolicy& policy, const ReductionConfig& cfg, std::uint64_t seed) {
  return reduce_exact(target, std::nullopt, dist, policy, cfg, seed);
}

inline ReductionResult reduce_uev(const PepsData<ComplexRational>& target,
                                  const LocalObservable<ComplexRational>& obs, const DistributionSpec& dist,
                                  const OraclePolicy& policy, ReductionConfig cfg, std::uint64_t seed) {
  cfg.variant = ReductionVariant::Uev;
  return reduce_exact(target, obs, dist, policy, cfg, seed);
}

// Normalized expectation value: the quotient of two degree <= 2N polynomials
// is recovered from at least 4N+1 exact samples per repeat; any wrong answer
// within a repeat surfaces as a failed or outvoted repeat.
inline ReductionResult reduce_nev(const PepsData<ComplexRational>& target,
                                  const LocalObservable<ComplexRational>& obs, const DistributionSpec& dist,
                                  const OraclePolicy& policy, const ReductionConfig& cfg, std::uint64_t seed) {
  target.validate();
  obs.validate(target.lattice, target.d);
  dist.validate();
  policy.validate();
  const std::size_t N = target.lattice.vertices();
  const int r = static_cast<int>(2 * N);
  const std::size_t k = cfg.k ? cfg.k : detail::default_k(ReductionVariant::Nev, N);
  if (k < 2 * static_cast<std::size_t>(r) + 1) {
    throw ConfigInvalid("nev reduction needs at least 4N+1 sample points");
  }

  auto [delta, eps] = epsilon_for(target.D, target.d, N);
  auto points = choose_sample_points(SampleVariant::Exact, k, eps);

  ReductionReport report;
  report.variant = "nev";
  report.width = target.lattice.width;
  report.height = target.lattice.height;
  report.n_vertices = N;
  report.d = target.d;
  report.D = target.D;
  report.degree = r;
  report.k = k;
  report.repeats_requested = cfg.repeats;
  report.delta = delta;
  report.eps = eps;
  report.points = points;
  report.master_seed = seed;

  MajorityVote<ComplexRational> vote(cfg.repeats);
  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    RepeatRecord rec;
    rec.seed = Rng::derive(seed, rep);
    Rng rng(rec.seed);
    auto mask = sample_peps_data(target, dist, rng);
    BlendPath<ComplexRational> path{target, mask};

    try {
      std::vector<ComplexRational> truths;
      truths.reserve(k);
      if (cfg.pointwise_engine) {
        for (const auto& t : points) truths.push_back(contract_nev(blend(path, t), obs, cfg.caps));
      } else {
        auto norm_poly = contraction_polynomial(path, cfg.caps);
        auto uev_poly_ = uev_polynomial(path, obs, cfg.caps);
        for (const auto& t : points) {
          ComplexRational den = norm_poly(ComplexRational(t));
          if (den.is_zero()) throw ZeroNorm();
          truths.push_back(uev_poly_(ComplexRational(t)) / den);
        }
      }

      auto outcomes = apply_policy(truths, policy, rng);
      SampleSet<ComplexRational> samples;
      samples.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        samples.push_back({ComplexRational(points[i]), outcomes[i].answer});
        if (outcomes[i].answer == truths[i]) ++rec.correct_answers;
      }

      auto f = reconstruct_rational(samples, r);
      ComplexRational den_at_one = f.den(ComplexRational(Rational(1)));
      if (den_at_one.is_zero()) throw ZeroDenominatorAtOne();
      ComplexRational candidate = f.num(ComplexRational(Rational(1))) / den_at_one;
      rec.decoded = true;
      rec.candidate = candidate;
      vote.add(candidate);
    } catch (const Error& e) {
      rec.failure = e.what();
      vote.add_failure();
    }
    report.repeats.push_back(std::move(rec));
    report.repeats_executed = rep + 1;
    if (cfg.early_stop && vote.settled()) break;
  }

  auto [value, tie] = vote.winner();
  if (tie) {
    report.outcome = "majority-tie";
    throw MajorityTie("majority vote tied between exact candidate values");
  }
  report.outcome = "ok";
  report.value = value;
  report.success = true;
  return {value, std::move(report)};
}

// Noisy-oracle reduction: interpolate the degree-2N contraction polynomial
// through r+1 equidistant noisy values on [0, eps] and extrapolate to t = 1,
// together with an outward-rounded error certificate composed from the
// discrete-norm bound between sample points and the extrapolation bound to 1,
// with the sub-interval [-R/2, R/2] of the rescaled sampling window as the
// hand-off region.
inline NoisyReductionResult reduce_noisy(const PepsData<ComplexRational>& target, const DistributionSpec& dist,
                                         const OraclePolicy& policy, const ReductionConfig& cfg,
                                         std::uint64_t seed) {
  target.validate();
  dist.validate();
  policy.validate();
  if (policy.mode != OraclePolicy::Mode::AdditiveNoise && policy.mode != OraclePolicy::Mode::AlwaysCorrect) {
    throw ConfigInvalid("noisy reduction expects an additive-noise (or exact) oracle");
  }
  const std::size_t N = target.lattice.vertices();
  const int r = static_cast<int>(2 * N);
  const std::size_t k = static_cast<std::size_t>(r) + 1;  // no oversampling

  auto [delta, eps] = epsilon_for(target.D, target.d, N);
  auto points = choose_sample_points(SampleVariant::Noisy, k, eps);

  ReductionReport report;
  report.variant = "noisy";
  report.width = target.lattice.width;
  report.height = target.lattice.height;
  report.n_vertices = N;
  report.d = target.d;
  report.D = target.D;
  report.degree = r;
  report.k = k;
  report.repeats_requested = 1;
  report.repeats_executed = 1;
  report.delta = delta;
  report.eps = eps;
  report.points = points;
  report.master_seed = seed;

  RepeatRecord rec;
  rec.seed = Rng::derive(seed, 0);
  Rng rng(rec.seed);
  auto mask = sample_peps_data(target, dist, rng);
  BlendPath<ComplexRational> path{target, mask};

  std::vector<ComplexRational> truths;
  truths.reserve(k);
  if (cfg.pointwise_engine) {
    for (const auto& t : points) truths.push_back(contract_norm(blend(path, t), cfg.caps));
  } else {
    auto qp = contraction_polynomial(path, cfg.caps);
    for (const auto& t : points) truths.push_back(qp(ComplexRational(t)));
  }

  auto outcomes = apply_policy(truths, policy, rng);
  SampleSet<ComplexRational> samples;
  samples.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    samples.push_back({ComplexRational(points[i]), outcomes[i].answer});
    if (outcomes[i].answer == truths[i]) ++rec.correct_answers;
  }

  auto q_tilde = vandermonde_interpolate(samples, r);
  ComplexRational value = q_tilde(ComplexRational(Rational(1)));
  rec.decoded = true;
  rec.candidate = value;
  report.repeats.push_back(std::move(rec));
  report.recovered = q_tilde;

  // Certificate: p = q_tilde - q has |p| <= 2^-B at the k sample points.
  // Rescaled to [-1, 1], the discrete-norm bound controls |p| on the
  // sub-interval [-R/2, R/2] (worst factor at its edge), whose half-width in
  // t-units is R_unit * eps / 4; the extrapolation bound then reaches t = 1.
  const unsigned noise_bits = policy.mode == OraclePolicy::Mode::AdditiveNoise ? policy.noise_bits : 0;
  Magnitude bound;
  if (policy.mode == OraclePolicy::Mode::AlwaysCorrect) {
    bound = Magnitude(Rational(0));  // exact oracle: q_tilde = q identically
  } else {
    Rational radius_sq = Rational(1) - Rational(static_cast<long>(r) * r, static_cast<long>(k) * static_cast<long>(k));
    auto rakh = rakhmanov_bound_at_sq(static_cast<long>(k), r, radius_sq / Rational(4), cfg.rakhmanov_c);
    Magnitude delta_samples(pow2(-static_cast<long>(noise_bits)));
    Magnitude on_subinterval = delta_samples.mul_up(rakh.value);
    // eps_paturi = sqrt(radius_sq) * eps / 4, rounded down for a valid bound
    Magnitude eps_paturi;
    mpfr_set_q(eps_paturi.raw(), radius_sq.mpq().get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(eps_paturi.raw(), eps_paturi.raw(), MPFR_RNDD);
    Magnitude eps_quarter(Rational(0));
    mpfr_set_q(eps_quarter.raw(), (eps / Rational(4)).mpq().get_mpq_t(), MPFR_RNDD);
    mpfr_mul(eps_paturi.raw(), eps_paturi.raw(), eps_quarter.raw(), MPFR_RNDD);
    bound = on_subinterval.mul_up(paturi_growth_factor(r, eps_paturi));
  }
  report.bound_decimal = bound.to_string();
  report.outcome = "ok";
  report.value = value;
  report.success = true;
  return {value, std::move(bound), std::move(report)};
}

}  // namespace pepsblend
