#include <catch2/catch_amalgamated.hpp>

#include "pepsblend/experiment.hpp"

using namespace pepsblend;

TEST_CASE("json round trips") {
  Rng rng(12);
  DistributionSpec dist;
  SECTION("complex-rational PEPS instance") {
    auto peps = sample_peps_data(empty_peps(LatticeSpec{2, 2}, 2, 2), dist, rng);
    auto j = peps_to_json(peps);
    CHECK(j.at("field").at("kind") == "complex-rational");
    auto back = peps_from_json(j);
    REQUIRE(std::holds_alternative<PepsData<ComplexRational>>(back));
    const auto& b = std::get<PepsData<ComplexRational>>(back);
    CHECK(b.tensors == peps.tensors);
    CHECK(b.lattice.width == 2);
    CHECK(contract_norm(b) == contract_norm(peps));
  }
  SECTION("prime-field PEPS instance") {
    PepsData<PrimeFieldElement> peps;
    peps.lattice = LatticeSpec{1, 2};
    peps.d = 2;
    peps.D = 2;
    peps.tensors = {{}, {}};
    for (int v = 0; v < 2; ++v) {
      // chain vertices have degree 1: d * D entries each
      for (int i = 0; i < 4; ++i) peps.tensors[static_cast<std::size_t>(v)].emplace_back(rng.below(101), 101);
    }
    auto back = peps_from_json(peps_to_json(peps));
    REQUIRE(std::holds_alternative<PepsData<PrimeFieldElement>>(back));
    CHECK(std::get<PepsData<PrimeFieldElement>>(back).tensors == peps.tensors);
  }
  SECTION("scalar formats are the normative strings") {
    CHECK(to_json(Rational(-3, 4)) == json("-3/4"));
    auto j = to_json(ComplexRational{Rational(1, 2), Rational(-5, 7)});
    CHECK(j.at("re") == "1/2");
    CHECK(j.at("im") == "-5/7");
    auto p = Polynomial<ComplexRational>::from_coeffs({ComplexRational(1), ComplexRational{Rational(0), Rational(1, 3)}},
                                                      ComplexRational());
    auto pj = polynomial_to_json(p);
    REQUIRE(pj.size() == 2);
    CHECK(pj[1].at("im") == "1/3");
  }
  SECTION("observable and matrix") {
    LocalObservable<ComplexRational> obs;
    obs.support = {0, 3};
    for (int i = 0; i < 16; ++i) obs.matrix.push_back(ComplexRational(Rational(i, 3)));
    auto back = observable_from_json(observable_to_json(obs));
    CHECK(back.support == obs.support);
    CHECK(back.matrix == obs.matrix);

    SquareMatrix<PrimeFieldElement> m;
    m.n = 2;
    for (std::uint64_t v : {1ull, 2ull, 3ull, 4ull}) m.a.emplace_back(v, 101);
    auto mj = matrix_to_json(m);
    auto mback = matrix_from_json(mj);
    CHECK(mback.a == m.a);
  }
  SECTION("malformed input raises IoError") {
    CHECK_THROWS_AS(peps_from_json(json::parse("{\"d\": 2}")), IoError);
    CHECK_THROWS_AS(complex_from_json(json::parse("42")), IoError);
  }
}

TEST_CASE("wilson interval") {
  auto w = wilson_interval(95, 100);
  CHECK(w.low > 0.88);
  CHECK(w.low < 0.90);
  CHECK(w.high > 0.97);
  CHECK(w.high < 0.99);
  auto all = wilson_interval(10, 10);
  CHECK(all.high == 1.0);  // clamped
  CHECK(all.low > 0.65);
  auto none = wilson_interval(0, 0);
  CHECK(none.low == 0.0);
}

TEST_CASE("run_experiment") {
  ExperimentConfig cfg;
  cfg.lattice = LatticeSpec{1, 2};
  cfg.reduction.repeats = 3;
  cfg.trials = 4;
  cfg.master_seed = 99;
  SECTION("always-correct oracle succeeds on every trial") {
    auto report = run_experiment(cfg);
    CHECK(report.successes == 4);
    CHECK(report.success_rate == 1.0);
    // cross-check: each row's recorded value equals the recomputed truth
    for (const auto& row : report.rows) {
      CHECK(row.success);
      CHECK(row.outcome == "ok");
    }
  }
  SECTION("zero trials is a valid empty run") {
    ExperimentConfig empty = cfg;
    empty.trials = 0;
    auto report = run_experiment(empty);
    CHECK(report.rows.empty());
    CHECK(report.successes == 0);
    CHECK(experiment_csv(report) == "seed,variant,N,D,d,k,m,failure_rate,success,value_re,value_im,bound\n");
  }
  SECTION("identical master seed gives byte-identical CSV") {
    ExperimentConfig mc = cfg;
    mc.policy.mode = OraclePolicy::Mode::IidFailure;
    mc.policy.failure_probability = 0.2;
    mc.trials = 6;
    auto csv1 = experiment_csv(run_experiment(mc));
    auto csv2 = experiment_csv(run_experiment(mc));
    CHECK(csv1 == csv2);
    mc.master_seed = 100;
    CHECK(experiment_csv(run_experiment(mc)) != csv1);
  }
  SECTION("parallel workers produce the serial result") {
    ExperimentConfig mc = cfg;
    mc.policy.mode = OraclePolicy::Mode::IidFailure;
    mc.policy.failure_probability = 0.3;
    mc.trials = 6;
    auto serial = experiment_csv(run_experiment(mc));
    mc.parallel = 3;
    CHECK(experiment_csv(run_experiment(mc)) == serial);
  }
  SECTION("cluster-state target") {
    ExperimentConfig cl = cfg;
    cl.source = ExperimentConfig::Source::Cluster;
    cl.lattice = LatticeSpec{2, 2};
    cl.trials = 2;
    auto report = run_experiment(cl);
    CHECK(report.successes == 2);
    // the cluster norm on 2x2 is 16; recorded exactly
    CHECK(report.rows[0].value_re == "16/1");
  }
  SECTION("translation-invariant targets with shared-Q sampling") {
    ExperimentConfig ti = cfg;
    ti.target_translation_invariant = true;
    ti.dist.translation_invariant = true;
    ti.policy.mode = OraclePolicy::Mode::IidFailure;
    ti.policy.failure_probability = 0.2;
    ti.reduction.repeats = 15;
    ti.trials = 5;
    auto report = run_experiment(ti);
    CHECK(report.successes == 5);
  }
  SECTION("config validation") {
    ExperimentConfig bad = cfg;
    bad.reduction.variant = ReductionVariant::Nev;
    CHECK_THROWS_AS(run_experiment(bad), ConfigInvalid);
  }
}

TEST_CASE("noisy experiment rows carry the certificate") {
  ExperimentConfig cfg;
  cfg.lattice = LatticeSpec{1, 2};
  cfg.reduction.variant = ReductionVariant::Noisy;
  cfg.policy.mode = OraclePolicy::Mode::AdditiveNoise;
  cfg.policy.noise_bits = 96;
  cfg.reduction.noise_bits = 96;
  cfg.trials = 3;
  cfg.master_seed = 5;
  auto report = run_experiment(cfg);
  CHECK(report.successes == 3);
  for (const auto& row : report.rows) CHECK(!row.bound.empty());
  auto csv = experiment_csv(report);
  CHECK(csv.find("noisy") != std::string::npos);
}
