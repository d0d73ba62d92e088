#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "pepsblend/reduction.hpp"
#include "pepsblend/tv.hpp"

using namespace pepsblend;

TEST_CASE("sampling determinism and degenerate width") {
  DistributionSpec dist;
  auto shape = empty_peps(LatticeSpec{2, 2}, 2, 2);
  SECTION("fixed seed reproduces bit-identical data") {
    Rng a(12345), b(12345);
    auto p1 = sample_peps_data(shape, dist, a);
    auto p2 = sample_peps_data(shape, dist, b);
    CHECK(p1.tensors == p2.tensors);
    Rng c(12346);
    auto p3 = sample_peps_data(shape, dist, c);
    CHECK(p1.tensors != p3.tensors);
  }
  SECTION("sigma below the dyadic grid yields all-zero tensors") {
    DistributionSpec tiny;
    tiny.sigma = pow2(-200);
    tiny.bits = 53;
    Rng rng(1);
    auto p = sample_peps_data(shape, tiny, rng);
    for (const auto& t : p.tensors) {
      for (const auto& z : t) CHECK(z.is_zero());
    }
  }
  SECTION("translation-invariant sampling shares one tensor per degree") {
    DistributionSpec ti;
    ti.translation_invariant = true;
    Rng rng(5);
    auto q = sample_peps_data(empty_peps(LatticeSpec{3, 3}, 2, 2), ti, rng);
    CHECK(is_translation_invariant_data(q));
    CHECK(q.translation_invariant);
    // corners share, edges share, interior alone
    CHECK(q.tensors[0] == q.tensors[2]);
    CHECK(q.tensors[1] == q.tensors[3]);
  }
}

TEST_CASE("sampled moments match the distribution (Monte Carlo)") {
  DistributionSpec dist;  // gaussian, sigma 1
  Rng rng(777);
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    double v = sample_real(dist, rng).to_double();
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) <= 3.0 * std::sqrt(2.0 / n));

  DistributionSpec uni;
  uni.kind = DistributionSpec::Kind::Uniform;
  uni.sigma = Rational(2);
  double lo = 1e9, hi = -1e9, usum = 0;
  for (int i = 0; i < n; ++i) {
    double v = sample_real(uni, rng).to_double();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    usum += v;
  }
  CHECK(lo >= -2.0);
  CHECK(hi < 2.0);
  CHECK(std::abs(usum / n) <= 3.0 * 2.0 / std::sqrt(3.0 * n));
}

TEST_CASE("blend path") {
  Rng rng(9);
  DistributionSpec dist;
  auto shape = empty_peps(LatticeSpec{2, 2}, 2, 2);
  auto p = sample_peps_data(shape, dist, rng);
  auto q = sample_peps_data(shape, dist, rng);
  BlendPath<ComplexRational> path{p, q};
  SECTION("endpoints and midpoint") {
    CHECK(blend(path, Rational(0)).tensors == q.tensors);
    CHECK(blend(path, Rational(1)).tensors == p.tensors);
    auto mid = blend(path, Rational(1, 2));
    for (std::size_t v = 0; v < mid.tensors.size(); ++v) {
      for (std::size_t i = 0; i < mid.tensors[v].size(); ++i) {
        CHECK(mid.tensors[v][i] + mid.tensors[v][i] == p.tensors[v][i] + q.tensors[v][i]);
      }
    }
  }
  SECTION("shape mismatch is rejected") {
    auto other = sample_peps_data(empty_peps(LatticeSpec{1, 2}, 2, 2), dist, rng);
    BlendPath<ComplexRational> bad{p, other};
    CHECK_THROWS_AS(blend(bad, Rational(1, 2)), ShapeMismatch);
  }
  SECTION("translation-invariant blending preserves invariance") {
    DistributionSpec ti;
    ti.translation_invariant = true;
    auto pt = sample_peps_data(shape, ti, rng);
    auto qt = sample_peps_data(shape, ti, rng);
    BlendPath<ComplexRational> tpath{pt, qt};
    for (long i = 0; i <= 8; ++i) {
      CHECK(is_translation_invariant_data(blend(tpath, Rational(i, 8))));
    }
  }
}

TEST_CASE("epsilon_for matches the closed form") {
  CHECK(epsilon_for(2, 2, 9).delta == Rational(1, 108));
  CHECK(epsilon_for(2, 2, 9).eps == Rational(1, 186624));
  CHECK(epsilon_for(1, 1, 1).delta == Rational(1, 12));
  CHECK(epsilon_for(1, 1, 1).eps == Rational(1, 72));
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    std::size_t D = 1 + rng.below(5), d = 1 + rng.below(5), N = 1 + rng.below(30);
    auto [delta, eps] = epsilon_for(D, d, N);
    Rational mult(static_cast<long>(6 * D * D * D * D * d * N));
    CHECK(eps * mult == delta);
  }
}

TEST_CASE("choose_sample_points") {
  SECTION("noisy variant: equidistant including endpoints") {
    auto pts = choose_sample_points(SampleVariant::Noisy, 3, Rational(1));
    REQUIRE(pts.size() == 3);
    CHECK(pts[0] == Rational(0));
    CHECK(pts[1] == Rational(1, 2));
    CHECK(pts[2] == Rational(1));
  }
  SECTION("exact variant: i*eps/k, excluding zero") {
    auto pts = choose_sample_points(SampleVariant::Exact, 4, Rational(1));
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == Rational(1, 4));
    CHECK(pts[3] == Rational(1));
  }
  SECTION("all points lie in [0, eps], pairwise distinct") {
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t k = 1 + rng.below(40);
      const Rational eps(1 + static_cast<long>(rng.below(100)), 1 + static_cast<long>(rng.below(100000)));
      auto variant = (t % 2) ? SampleVariant::Exact : SampleVariant::Noisy;
      auto pts = choose_sample_points(variant, k, eps);
      REQUIRE(pts.size() == k);
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(pts[i] >= Rational(0));
        CHECK(pts[i] <= eps);
        for (std::size_t j = i + 1; j < k; ++j) CHECK(pts[i] != pts[j]);
      }
    }
  }
}

TEST_CASE("contraction polynomial agrees with pointwise contraction") {
  Rng rng(2);
  DistributionSpec dist;
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    auto shape = empty_peps(LatticeSpec{w, h}, 2, 2);
    auto p = sample_peps_data(shape, dist, rng);
    auto q = sample_peps_data(shape, dist, rng);
    BlendPath<ComplexRational> path{p, q};
    auto poly = contraction_polynomial(path);
    const std::size_t n = w * h;
    CHECK(poly.degree() <= static_cast<int>(2 * n));
    for (long i = 0; i < 4; ++i) {
      Rational t(2 * i + 1, 7);
      CHECK(poly(ComplexRational(t)) == contract_norm(blend(path, t)));
    }
    auto obs = identity_observable<ComplexRational>(0, 2, ComplexRational());
    obs.matrix[3] = ComplexRational(Rational(1, 3));
    auto upoly = uev_polynomial(path, obs);
    CHECK(upoly.degree() <= static_cast<int>(2 * n));
    for (long i = 0; i < 3; ++i) {
      Rational t(i + 1, 5);
      CHECK(upoly(ComplexRational(t)) == contract_uev(blend(path, t), obs));
    }
  }
}

TEST_CASE("degree bound: 2N+1 samples predict held-out points exactly") {
  Rng rng(1010);
  DistributionSpec dist;
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 2}, {2, 2}, {2, 3}}) {
    const std::size_t n = w * h;
    const int r = static_cast<int>(2 * n);
    auto shape = empty_peps(LatticeSpec{w, h}, 2, 2);
    auto p = sample_peps_data(shape, dist, rng);
    auto q = sample_peps_data(shape, dist, rng);
    BlendPath<ComplexRational> path{p, q};
    SampleSet<ComplexRational> samples;
    for (int i = 1; i <= r + 6; ++i) {
      Rational t(i, 32);
      samples.push_back({ComplexRational(t), contract_norm(blend(path, t))});
    }
    auto fit = vandermonde_interpolate(samples, r);
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < samples.size(); ++i) {
      CHECK(fit(samples[i].x) == samples[i].y);
    }
  }
}

TEST_CASE("oracle policy") {
  Rng rng(40);
  std::vector<ComplexRational> truths(10000, ComplexRational(Rational(7, 3)));
  SECTION("always-correct is a passthrough") {
    OraclePolicy p;
    auto out = apply_policy(truths, p, rng);
    for (const auto& o : out) CHECK(o.answer == truths[0]);
  }
  SECTION("iid failure rate is near its parameter") {
    OraclePolicy p;
    p.mode = OraclePolicy::Mode::IidFailure;
    p.failure_probability = 0.25;
    auto out = apply_policy(truths, p, rng);
    std::size_t bad = 0;
    for (const auto& o : out) {
      if (o.corrupted) {
        ++bad;
        CHECK(o.answer != truths[0]);
      } else {
        CHECK(o.answer == truths[0]);
      }
    }
    const double rate = static_cast<double>(bad) / static_cast<double>(truths.size());
    CHECK(std::abs(rate - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(truths.size())));
  }
  SECTION("adversarial subset corrupts an exact count") {
    OraclePolicy p;
    p.mode = OraclePolicy::Mode::AdversarialSubset;
    p.subset_fraction = 0.3;
    p.subset_window = 40;
    std::vector<ComplexRational> window(40, ComplexRational(1));
    auto out = apply_policy(window, p, rng);
    std::size_t bad = 0;
    for (const auto& o : out) bad += o.corrupted ? 1 : 0;
    CHECK(bad == 12);
  }
  SECTION("additive noise stays within 2^-B") {
    OraclePolicy p;
    p.mode = OraclePolicy::Mode::AdditiveNoise;
    p.noise_bits = 64;
    std::vector<ComplexRational> vals(200, ComplexRational(Rational(1, 3)));
    auto out = apply_policy(vals, p, rng);
    for (const auto& o : out) {
      auto diff = o.answer - vals[0];
      CHECK(diff.im().is_zero());
      CHECK(diff.re().abs() <= pow2(-64));
    }
  }
  SECTION("make_faulty_oracle wraps an engine") {
    auto engine = [](const PepsData<ComplexRational>& peps) { return contract_norm(peps); };
    DistributionSpec dist;
    Rng prng(4);
    auto peps = sample_peps_data(empty_peps(LatticeSpec{1, 2}, 2, 2), dist, prng);
    auto truth = contract_norm(peps);
    OraclePolicy pass;
    auto oracle = make_faulty_oracle<PepsData<ComplexRational>, ComplexRational>(engine, pass);
    CHECK(oracle(peps) == truth);
    OraclePolicy noisy;
    noisy.mode = OraclePolicy::Mode::AdditiveNoise;
    noisy.noise_bits = 64;
    noisy.seed = 3;
    auto noisy_oracle = make_faulty_oracle<PepsData<ComplexRational>, ComplexRational>(engine, noisy);
    for (int i = 0; i < 5; ++i) {
      auto diff = noisy_oracle(peps) - truth;
      CHECK(diff.re().abs() <= pow2(-64));
    }
    OraclePolicy iid;
    iid.mode = OraclePolicy::Mode::IidFailure;
    iid.failure_probability = 0.25;
    iid.seed = 99;
    auto faulty = make_faulty_oracle<PepsData<ComplexRational>, ComplexRational>(engine, iid);
    int bad = 0;
    for (int i = 0; i < 2000; ++i) {
      if (faulty(peps) != truth) ++bad;
    }
    CHECK(std::abs(bad / 2000.0 - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / 2000.0));
  }
}

TEST_CASE("reduce_exact with a never-failing oracle is exact for all seeds") {
  DistributionSpec dist;
  OraclePolicy pass;
  ReductionConfig cfg;
  cfg.repeats = 3;
  Rng rng(21);
  auto shape = empty_peps(LatticeSpec{1, 2}, 2, 2);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto target = sample_peps_data(shape, dist, rng);
    auto res = reduce_exact(target, dist, pass, cfg, seed);
    CHECK(res.value == contract_norm(target));
    CHECK(res.report.success);
  }
}

TEST_CASE("reduce_exact under i.i.d. failures (Monte Carlo)") {
  DistributionSpec dist;
  OraclePolicy iid;
  iid.mode = OraclePolicy::Mode::IidFailure;
  iid.failure_probability = 0.2;
  ReductionConfig cfg;
  cfg.repeats = 25;
  Rng rng(31);
  auto shape = empty_peps(LatticeSpec{2, 2}, 2, 2);
  auto target = sample_peps_data(shape, dist, rng);
  auto truth = contract_norm(target);
  int wins = 0;
  for (int trial = 0; trial < 40; ++trial) {
    try {
      auto res = reduce_exact(target, dist, iid, cfg, 9000 + static_cast<std::uint64_t>(trial));
      if (res.value == truth) ++wins;
    } catch (const Error&) {
    }
  }
  CHECK(wins >= 39);

  SECTION("negative control at failure 0.6 collapses") {
    OraclePolicy heavy;
    heavy.mode = OraclePolicy::Mode::IidFailure;
    heavy.failure_probability = 0.6;
    int heavy_wins = 0;
    for (int trial = 0; trial < 20; ++trial) {
      try {
        auto res = reduce_exact(target, dist, heavy, cfg, 800 + static_cast<std::uint64_t>(trial));
        if (res.value == truth) ++heavy_wins;
      } catch (const Error&) {
      }
    }
    CHECK(heavy_wins <= 4);
  }
}

TEST_CASE("reduce_uev") {
  DistributionSpec dist;
  OraclePolicy pass;
  ReductionConfig cfg;
  cfg.repeats = 3;
  Rng rng(77);
  auto target = sample_peps_data(empty_peps(LatticeSpec{2, 2}, 2, 2), dist, rng);
  auto id = identity_observable<ComplexRational>(0, 2, ComplexRational());
  SECTION("identity observable agrees with reduce_exact") {
    auto via_obs = reduce_uev(target, id, dist, pass, cfg, 5);
    auto via_norm = reduce_exact(target, dist, pass, cfg, 5);
    CHECK(via_obs.value == via_norm.value);
  }
  SECTION("exact oracle equals contract_uev") {
    LocalObservable<ComplexRational> obs;
    obs.support = {1};
    obs.matrix = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
    auto res = reduce_uev(target, obs, dist, pass, cfg, 6);
    CHECK(res.value == contract_uev(target, obs));
  }
  SECTION("20% failures recover (Monte Carlo)") {
    OraclePolicy iid;
    iid.mode = OraclePolicy::Mode::IidFailure;
    iid.failure_probability = 0.2;
    ReductionConfig mc = cfg;
    mc.repeats = 25;
    LocalObservable<ComplexRational> obs;
    obs.support = {1};
    obs.matrix = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
    auto truth = contract_uev(target, obs);
    int wins = 0;
    for (int trial = 0; trial < 20; ++trial) {
      try {
        if (reduce_uev(target, obs, dist, iid, mc, 300 + static_cast<std::uint64_t>(trial)).value == truth) ++wins;
      } catch (const Error&) {
      }
    }
    CHECK(wins >= 19);
  }
}

TEST_CASE("reduce_nev") {
  DistributionSpec dist;
  OraclePolicy pass;
  ReductionConfig cfg;
  cfg.variant = ReductionVariant::Nev;
  cfg.repeats = 3;
  Rng rng(15);
  auto target = sample_peps_data(empty_peps(LatticeSpec{2, 2}, 2, 2), dist, rng);
  LocalObservable<ComplexRational> obs;
  obs.support = {0};
  obs.matrix = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
  SECTION("identity observable gives exactly 1") {
    auto id = identity_observable<ComplexRational>(0, 2, ComplexRational());
    auto res = reduce_nev(target, id, dist, pass, cfg, 8);
    CHECK(res.value == ComplexRational(1));
  }
  SECTION("exact oracle equals contract_nev, 4N+1 samples suffice") {
    auto res = reduce_nev(target, obs, dist, pass, cfg, 9);
    CHECK(res.report.k == 17);  // 4N+1 with N = 4
    CHECK(res.value == contract_nev(target, obs));
  }
  SECTION("repeat-level all-correct probability matches the proof bound") {
    // per-query failure 2*delta = 1/(12N); all 17 of a repeat's queries must
    // be correct for that repeat to vote with the truth
    const std::size_t n_sites = 4;
    OraclePolicy iid;
    iid.mode = OraclePolicy::Mode::IidFailure;
    iid.failure_probability = 1.0 / (12.0 * static_cast<double>(n_sites));
    ReductionConfig mc = cfg;
    mc.repeats = 200;
    mc.early_stop = false;
    auto res = reduce_nev(target, obs, dist, iid, mc, 1212);
    std::size_t all_correct = 0;
    for (const auto& rec : res.report.repeats) {
      if (rec.correct_answers == res.report.k) ++all_correct;
    }
    const double phat = static_cast<double>(all_correct) / 200.0;
    const double sigma_hat = std::sqrt(phat * (1 - phat) / 200.0);
    const double bound = 2.0 / 3.0 - 1.0 / (12.0 * static_cast<double>(n_sites));
    CHECK(phat >= bound - 3 * sigma_hat);
  }
}

TEST_CASE("reduce_noisy") {
  DistributionSpec dist;
  ReductionConfig cfg;
  cfg.variant = ReductionVariant::Noisy;
  Rng rng(3);
  auto target = sample_peps_data(empty_peps(LatticeSpec{2, 2}, 2, 2), dist, rng);
  auto truth = contract_norm(target);
  SECTION("noiseless interpolation is exact") {
    OraclePolicy pass;
    auto res = reduce_noisy(target, dist, pass, cfg, 77);
    CHECK(res.value == truth);
  }
  SECTION("certificate covers the error at B = 128") {
    OraclePolicy noise;
    noise.mode = OraclePolicy::Mode::AdditiveNoise;
    noise.noise_bits = 128;
    for (int trial = 0; trial < 10; ++trial) {
      auto res = reduce_noisy(target, dist, noise, cfg, 500 + static_cast<std::uint64_t>(trial));
      auto diff = res.value - truth;
      REQUIRE(diff.im().is_zero());
      CHECK(res.bound.dominates(diff.re().abs()));
    }
  }
  SECTION("certificate equals the documented composition") {
    OraclePolicy noise;
    noise.mode = OraclePolicy::Mode::AdditiveNoise;
    noise.noise_bits = 128;
    auto res = reduce_noisy(target, dist, noise, cfg, 4);
    const int r = res.report.degree;
    const long k = static_cast<long>(res.report.k);
    Rational radius_sq = Rational(1) - Rational(static_cast<long>(r) * r, k * k);
    auto rakh = rakhmanov_bound_at_sq(k, r, radius_sq / Rational(4), Rational(1));
    Magnitude delta(pow2(-128));
    Magnitude eps_paturi;
    mpfr_set_q(eps_paturi.raw(), radius_sq.mpq().get_mpq_t(), MPFR_RNDD);
    mpfr_sqrt(eps_paturi.raw(), eps_paturi.raw(), MPFR_RNDD);
    Magnitude eq(res.report.eps / Rational(4));
    mpfr_set_q(eq.raw(), (res.report.eps / Rational(4)).mpq().get_mpq_t(), MPFR_RNDD);
    mpfr_mul(eps_paturi.raw(), eps_paturi.raw(), eq.raw(), MPFR_RNDD);
    auto expect = delta.mul_up(rakh.value).mul_up(paturi_growth_factor(r, eps_paturi));
    CHECK(res.bound.to_string() == expect.to_string());
  }
}

TEST_CASE("markov chain-of-inequalities at small scale") {
  // fraction of repeats with >= (k+r)/2 correct answers, failure rate just
  // below 1/4, must clear 1/2 - r/(2(k-r)) - 3 sigma-hat
  DistributionSpec dist;
  OraclePolicy iid;
  iid.mode = OraclePolicy::Mode::IidFailure;
  iid.failure_probability = 0.24;
  ReductionConfig cfg;
  cfg.repeats = 150;
  cfg.early_stop = false;
  Rng rng(7);
  auto target = sample_peps_data(empty_peps(LatticeSpec{1, 2}, 2, 2), dist, rng);
  auto res = reduce_exact(target, dist, iid, cfg, 51);
  const std::size_t k = res.report.k;
  const int r = res.report.degree;
  std::size_t good = 0;
  for (const auto& rec : res.report.repeats) {
    if (2 * rec.correct_answers >= k + static_cast<std::size_t>(r)) ++good;
  }
  const double phat = static_cast<double>(good) / static_cast<double>(res.report.repeats.size());
  const double sigma_hat = std::sqrt(phat * (1 - phat) / static_cast<double>(res.report.repeats.size()));
  const double bound = 0.5 - static_cast<double>(r) / (2.0 * static_cast<double>(k - static_cast<std::size_t>(r)));
  CHECK(phat >= bound - 3 * sigma_hat);
}

TEST_CASE("majority amplification decays exponentially in the repeat count") {
  // tuned so a single repeat succeeds with probability well above 1/2 but
  // far from 1; the majority failure rate must fall off log-linearly in m
  DistributionSpec dist;
  OraclePolicy iid;
  iid.mode = OraclePolicy::Mode::IidFailure;
  iid.failure_probability = 0.25;
  Rng rng(8);
  auto target = sample_peps_data(empty_peps(LatticeSpec{1, 2}, 2, 2), dist, rng);
  auto truth = contract_norm(target);
  const std::vector<std::size_t> ms{1, 5, 9, 13, 17, 21, 25, 29, 33};
  std::vector<double> fail_rates;
  const int trials = 120;
  for (std::size_t m : ms) {
    ReductionConfig cfg;
    cfg.k = 12;  // 3r: roomy enough to decode, small enough to fail visibly
    cfg.repeats = m;
    int fails = 0;
    for (int t = 0; t < trials; ++t) {
      try {
        auto res = reduce_exact(target, dist, iid, cfg, 100000 * m + static_cast<std::uint64_t>(t));
        if (res.value != truth) ++fails;
      } catch (const Error&) {
        ++fails;
      }
    }
    fail_rates.push_back((fails + 0.5) / (trials + 1.0));
  }
  // log-linear fit: slope of log(failure) against m must be clearly negative
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double x = static_cast<double>(ms[i]);
    const double y = std::log(fail_rates[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(ms.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  std::ostringstream rates;
  for (double f : fail_rates) rates << f << " ";
  INFO("failure rates: " << rates.str() << ", slope " << slope);
  CHECK(slope < -0.05);
  CHECK(fail_rates.back() < fail_rates.front());
}

TEST_CASE("tv bounds") {
  SECTION("exact bounds") {
    CHECK(tv_bound_scale(3, Rational(1, 100)) == Rational(3, 50));
    CHECK(tv_bound_shift({Rational(1, 2), Rational(-1, 3)}, Rational(2)) == Rational(5, 12));
    CHECK(tv_bound_shift({}, Rational(1)) == Rational(0));
  }
  SECTION("zero shift has zero distance") {
    CHECK(numeric_tv_shift(0.0) == 0.0);
    CHECK(tv_bound_shift({Rational(0)}, Rational(1)) == Rational(0));
  }
  SECTION("quadrature stays within the bounds with positive margin") {
    for (double eps : {0.1, 0.01, 0.001}) {
      CHECK(numeric_tv_scale(eps) <= 2 * eps);
      CHECK(numeric_tv_scale(eps) > 0);
    }
    Rng rng(1);
    for (int i = 0; i < 5; ++i) {
      double v = rng.uniform_symmetric();
      CHECK(numeric_tv_shift(v) <= std::abs(v));
    }
  }
  SECTION("blend-path combined drift bound: (4 + 2) D^4 d N eps") {
    const std::size_t D = 2, d = 2, N = 6;
    auto [delta, eps] = epsilon_for(D, d, N);
    const std::size_t m = D * D * D * D * d * N;
    Rational combined = tv_bound_scale(2 * m, eps);  // 4 D^4 d N eps (C = R^2 components)
    std::vector<Rational> shifts(2 * m, eps);        // |t p_i| <= eps for unit-bounded targets
    combined += tv_bound_shift(shifts, Rational(1));
    CHECK(combined == Rational(6 * static_cast<long>(m)) * eps);
    CHECK(combined == delta);
  }
}
