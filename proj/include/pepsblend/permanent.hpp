#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pepsblend/errors.hpp"
#include "pepsblend/field.hpp"
#include "pepsblend/interpolate.hpp"
#include "pepsblend/majority.hpp"
#include "pepsblend/sampling.hpp"

namespace pepsblend {

template <FieldType F>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<F> a;  // row-major

  const F& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  F& at(std::size_t i, std::size_t j) { return a[i * n + j]; }

  void validate() const {
    if (n == 0) throw ConfigInvalid("matrix dimension must be positive");
    if (a.size() != n * n) throw ShapeMismatch("matrix entries must be n x n");
  }
};

// perm(A) = sum over permutations of prod_i A[i, sigma(i)], the determinant
// without signs. Explicit S_n summation; this module is an oracle and
// baseline, so the factorial cap stays small by design.
template <FieldType F>
F permanent_bruteforce(const SquareMatrix<F>& m, std::size_t cap = 9) {
  m.validate();
  if (m.n > cap) throw SizeCapExceeded("permanent_bruteforce is capped at n = " + std::to_string(cap));
  std::vector<std::size_t> perm(m.n);
  std::iota(perm.begin(), perm.end(), 0);
  F acc = zero_like(m.a[0]);
  do {
    F term = one_like(m.a[0]);
    for (std::size_t i = 0; i < m.n; ++i) term *= m.at(i, perm[i]);
    acc += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

struct LiptonConfig {
  std::size_t k = 0;  // 0 -> 4n
  std::size_t repeats = 15;
  bool early_stop = true;
};

struct LiptonReport {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::size_t k = 0;
  std::size_t repeats_requested = 0;
  std::size_t repeats_executed = 0;
  std::size_t decoded_repeats = 0;
  std::uint64_t master_seed = 0;
};

struct LiptonResult {
  PrimeFieldElement value;
  LiptonReport report;
};

// Lipton's random self-reduction for the permanent over F_q: per repeat, draw
// a uniform mask B, sample q(t) = perm(A + tB) (degree n in t) at k distinct
// nonzero points through the faulty oracle, Berlekamp-Welch-decode and read
// off q(0) = perm(A); majority vote over repeats. The target sits at t = 0
// here, in contrast to the blend-path construction where it sits at t = 1.
inline LiptonResult lipton_reduce(const SquareMatrix<PrimeFieldElement>& target,
                                  const std::function<PrimeFieldElement(const SquareMatrix<PrimeFieldElement>&)>& oracle,
                                  const LiptonConfig& cfg, std::uint64_t seed) {
  target.validate();
  const std::uint64_t q = target.a[0].modulus();
  const std::size_t n = target.n;
  const std::size_t k = cfg.k ? cfg.k : 4 * n;
  if (k <= n) throw ConfigInvalid("lipton_reduce needs k > n sample points");
  // k distinct nonzero abscissae require a large enough field
  if (q <= k) throw ConfigInvalid("lipton_reduce needs modulus q > k");

  LiptonReport report;
  report.n = n;
  report.q = q;
  report.k = k;
  report.repeats_requested = cfg.repeats;
  report.master_seed = seed;

  MajorityVote<PrimeFieldElement> vote(cfg.repeats);
  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    Rng rng(Rng::derive(seed, rep));
    SquareMatrix<PrimeFieldElement> mask;
    mask.n = n;
    mask.a.reserve(n * n);
    for (std::size_t i = 0; i < n * n; ++i) mask.a.push_back(PrimeFieldElement(rng.below(q), q));

    SampleSet<PrimeFieldElement> samples;
    samples.reserve(k);
    SquareMatrix<PrimeFieldElement> blended;
    blended.n = n;
    for (std::size_t ti = 1; ti <= k; ++ti) {
      PrimeFieldElement t(ti, q);
      blended.a.clear();
      blended.a.reserve(n * n);
      for (std::size_t i = 0; i < n * n; ++i) blended.a.push_back(target.a[i] + t * mask.a[i]);
      samples.push_back({t, oracle(blended)});
    }
    try {
      auto decoded = berlekamp_welch(samples, static_cast<int>(n));
      vote.add(decoded(PrimeFieldElement(0, q)));
      ++report.decoded_repeats;
    } catch (const DecodingFailure&) {
      vote.add_failure();
    }
    report.repeats_executed = rep + 1;
    if (cfg.early_stop && vote.settled()) break;
  }

  auto [value, tie] = vote.winner();
  if (tie) throw MajorityTie("majority vote tied between permanent candidates");
  return {value, report};
}

}  // namespace pepsblend
