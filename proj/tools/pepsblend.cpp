// Command-line surface for exact PEPS contraction, the worst-to-average
// reduction experiments, the Lipton permanent baseline, and the numeric
// lemma checks. Exit codes: 0 success, 2 configuration or I/O error,
// 3 decode/majority failure, 4 size cap exceeded.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pepsblend/experiment.hpp"
#include "pepsblend/serialize.hpp"
#include "pepsblend/tv.hpp"

namespace pb = pepsblend;
using pb::json;

namespace {

struct CommonOut {
  std::string out_path;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOut& out) {
  cmd->add_option("--out", out.out_path, "write the result to this path");
  cmd->add_option("--format", out.format, "output format")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const CommonOut& out, const json& j, const std::string& csv = "") {
  std::string payload = out.format == "csv" && !csv.empty() ? csv : j.dump(2) + "\n";
  if (out.out_path.empty()) {
    std::cout << payload;
  } else {
    pb::write_text_file(out.out_path, payload);
  }
}

pb::LocalObservable<pb::ComplexRational> load_observable(const std::string& path, std::size_t d) {
  if (!path.empty()) return pb::observable_from_json(pb::load_json_file(path));
  // default probe observable: diag(1, 0, ..., 0) on site 0
  pb::LocalObservable<pb::ComplexRational> obs;
  obs.support = {0};
  obs.matrix.assign(d * d, pb::ComplexRational());
  obs.matrix[0] = pb::ComplexRational(1);
  return obs;
}

int verify_gaussian_tv();
int verify_degree_bound(std::uint64_t seed);
int verify_paturi();
int verify_rakhmanov(std::uint64_t seed);
int run_bench();

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact PEPS contraction and worst-to-average-case reduction toolkit"};
  app.require_subcommand(1);

  // --- contract / uev / nev ---------------------------------------------
  std::string instance_path, obs_path;
  CommonOut out;
  std::size_t cap_width = 6;

  auto* c_contract = app.add_subcommand("contract", "exact <psi|psi> of a PEPS instance");
  c_contract->add_option("instance", instance_path, "instance JSON")->required();
  c_contract->add_option("--max-width", cap_width, "contraction width cap");
  add_common(c_contract, out);

  auto* c_uev = app.add_subcommand("uev", "exact <psi|A|psi> of a PEPS instance");
  c_uev->add_option("instance", instance_path, "instance JSON")->required();
  c_uev->add_option("--obs", obs_path, "observable JSON (default: diag(1,0,...) on site 0)");
  c_uev->add_option("--max-width", cap_width, "contraction width cap");
  add_common(c_uev, out);

  auto* c_nev = app.add_subcommand("nev", "exact <psi|A|psi>/<psi|psi> of a PEPS instance");
  c_nev->add_option("instance", instance_path, "observable JSON")->required();
  c_nev->add_option("--obs", obs_path, "observable JSON (default: diag(1,0,...) on site 0)");
  c_nev->add_option("--max-width", cap_width, "contraction width cap");
  add_common(c_nev, out);

  // --- reduce --------------------------------------------------------------
  pb::ExperimentConfig xcfg;
  std::string variant = "exact", target = "random", sigma = "1/1";
  double failure_rate = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  unsigned bits = 53, noise_bits = 128;
  bool ti = false, pointwise = false;
  std::size_t kk = 0, repeats = 25, parallel = 1;
  std::size_t width = 2, height = 3, phys_d = 2, bond_D = 2;

  auto* c_reduce = app.add_subcommand("reduce", "worst-to-average-case reduction experiments");
  c_reduce->add_option("--variant", variant, "exact | noisy | uev | nev")
      ->check(CLI::IsMember({"exact", "noisy", "uev", "nev"}));
  c_reduce->add_option("--target", target, "random | cluster | file")->check(CLI::IsMember({"random", "cluster", "file"}));
  c_reduce->add_option("--instance", instance_path, "instance JSON for --target file");
  c_reduce->add_option("--obs", obs_path, "observable JSON for uev/nev");
  c_reduce->add_option("--width", width, "lattice width");
  c_reduce->add_option("--height", height, "lattice height");
  c_reduce->add_option("-d,--phys-dim", phys_d, "physical dimension");
  c_reduce->add_option("-D,--bond-dim", bond_D, "bond dimension");
  c_reduce->add_option("--failure-rate", failure_rate, "oracle i.i.d. failure probability");
  c_reduce->add_option("--noise-bits", noise_bits, "additive-noise bound 2^-B for the noisy variant");
  c_reduce->add_option("--k", kk, "sample points per repeat (0 = variant default)");
  c_reduce->add_option("--repeats", repeats, "majority-vote repeats");
  c_reduce->add_option("--trials", trials, "independent trials");
  c_reduce->add_option("--seed", seed, "master seed");
  c_reduce->add_option("--sigma", sigma, "instance distribution scale, as p/q");
  c_reduce->add_option("--bits", bits, "dyadic precision of sampled entries");
  c_reduce->add_flag("--translation-invariant", ti, "translation-invariant target and shared-Q sampling");
  c_reduce->add_flag("--pointwise", pointwise, "contract every oracle query individually");
  c_reduce->add_option("--parallel", parallel, "worker threads for trials");
  add_common(c_reduce, out);

  // --- permanent ------------------------------------------------------------
  std::size_t perm_n = 5;
  std::uint64_t perm_q = 101;
  auto* c_perm = app.add_subcommand("permanent", "Lipton random self-reduction baseline over F_q");
  c_perm->add_option("--n", perm_n, "matrix dimension");
  c_perm->add_option("--q", perm_q, "prime modulus (must exceed k)");
  c_perm->add_option("--failure-rate", failure_rate, "oracle i.i.d. failure probability");
  c_perm->add_option("--k", kk, "sample points per repeat (0 = 4n)");
  c_perm->add_option("--repeats", repeats, "majority-vote repeats");
  c_perm->add_option("--trials", trials, "independent trials");
  c_perm->add_option("--seed", seed, "master seed");
  add_common(c_perm, out);

  // --- verify-lemma ---------------------------------------------------------
  std::string lemma;
  auto* c_lemma = app.add_subcommand("verify-lemma", "numeric checks of the bound lemmas");
  c_lemma->add_option("lemma", lemma, "gaussian-tv | degree-bound | paturi | rakhmanov")
      ->required()
      ->check(CLI::IsMember({"gaussian-tv", "degree-bound", "paturi", "rakhmanov"}));
  c_lemma->add_option("--seed", seed, "seed for randomized checks");

  // --- bench ------------------------------------------------------------------
  auto* c_bench = app.add_subcommand("bench", "timing of the exact kernels at desk scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    pb::ContractionCaps caps;
    caps.max_width = cap_width;

    if (*c_contract || *c_uev || *c_nev) {
      auto inst = pb::peps_from_json(pb::load_json_file(instance_path));
      json j;
      if (*c_contract) {
        std::visit([&](const auto& peps) { j["value"] = pb::to_json(contract_norm(peps, caps)); }, inst);
      } else {
        if (!std::holds_alternative<pb::PepsData<pb::ComplexRational>>(inst)) {
          throw pb::ConfigInvalid("uev/nev need a complex-rational instance");
        }
        const auto& peps = std::get<pb::PepsData<pb::ComplexRational>>(inst);
        auto obs = load_observable(obs_path, peps.d);
        j["value"] = pb::to_json(*c_uev ? contract_uev(peps, obs, caps) : contract_nev(peps, obs, caps));
      }
      emit(out, j);
      return 0;
    }

    if (*c_reduce) {
      xcfg.lattice = pb::LatticeSpec{width, height};
      xcfg.d = phys_d;
      xcfg.D = bond_D;
      xcfg.source = target == "cluster"  ? pb::ExperimentConfig::Source::Cluster
                    : target == "file"   ? pb::ExperimentConfig::Source::File
                                         : pb::ExperimentConfig::Source::Random;
      xcfg.instance_path = instance_path;
      xcfg.target_translation_invariant = ti;
      xcfg.dist.sigma = pb::Rational::parse(sigma);
      xcfg.dist.bits = bits;
      xcfg.dist.translation_invariant = ti;
      xcfg.reduction.variant = variant == "noisy" ? pb::ReductionVariant::Noisy
                               : variant == "uev" ? pb::ReductionVariant::Uev
                               : variant == "nev" ? pb::ReductionVariant::Nev
                                                  : pb::ReductionVariant::Exact;
      xcfg.reduction.k = kk;
      xcfg.reduction.repeats = repeats;
      xcfg.reduction.noise_bits = noise_bits;
      xcfg.reduction.pointwise_engine = pointwise;
      if (variant == "noisy") {
        xcfg.policy.mode = pb::OraclePolicy::Mode::AdditiveNoise;
        xcfg.policy.noise_bits = noise_bits;
      } else if (failure_rate > 0) {
        xcfg.policy.mode = pb::OraclePolicy::Mode::IidFailure;
        xcfg.policy.failure_probability = failure_rate;
      }
      if (variant == "uev" || variant == "nev") {
        xcfg.observable = load_observable(obs_path, phys_d);
      }
      xcfg.trials = trials;
      xcfg.master_seed = seed;
      xcfg.parallel = parallel;

      if (trials == 1) {
        // single run: full report, decode failures surface in the exit code
        auto target_peps = pb::detail::make_target(xcfg, pb::Rng::derive(seed, 0), std::nullopt);
        if (xcfg.source == pb::ExperimentConfig::Source::File) {
          auto inst = pb::peps_from_json(pb::load_json_file(instance_path));
          target_peps = std::get<pb::PepsData<pb::ComplexRational>>(inst);
        }
        json j;
        if (xcfg.reduction.variant == pb::ReductionVariant::Noisy) {
          auto res = reduce_noisy(target_peps, xcfg.dist, xcfg.policy, xcfg.reduction, pb::Rng::derive(seed, 0));
          j = pb::report_to_json(res.report);
        } else if (xcfg.reduction.variant == pb::ReductionVariant::Nev) {
          auto res = reduce_nev(target_peps, *xcfg.observable, xcfg.dist, xcfg.policy, xcfg.reduction,
                                pb::Rng::derive(seed, 0));
          j = pb::report_to_json(res.report);
        } else if (xcfg.reduction.variant == pb::ReductionVariant::Uev) {
          auto res = reduce_uev(target_peps, *xcfg.observable, xcfg.dist, xcfg.policy, xcfg.reduction,
                                pb::Rng::derive(seed, 0));
          j = pb::report_to_json(res.report);
        } else {
          auto res = reduce_exact(target_peps, xcfg.dist, xcfg.policy, xcfg.reduction, pb::Rng::derive(seed, 0));
          j = pb::report_to_json(res.report);
        }
        emit(out, j);
        return 0;
      }
      auto report = pb::run_experiment(xcfg);
      emit(out, pb::experiment_json(report), pb::experiment_csv(report));
      return 0;
    }

    if (*c_perm) {
      const std::size_t k = kk ? kk : 4 * perm_n;
      pb::OraclePolicy policy;
      if (failure_rate > 0) {
        policy.mode = pb::OraclePolicy::Mode::IidFailure;
        policy.failure_probability = failure_rate;
        policy.seed = seed;
      }
      json rows = json::array();
      std::size_t successes = 0;
      for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = pb::Rng::derive(seed, trial);
        pb::Rng rng(pb::Rng::derive(trial_seed, 0xA));
        pb::SquareMatrix<pb::PrimeFieldElement> a;
        a.n = perm_n;
        for (std::size_t i = 0; i < perm_n * perm_n; ++i) {
          a.a.push_back(pb::PrimeFieldElement(rng.below(perm_q), perm_q));
        }
        auto truth = pb::permanent_bruteforce(a);
        auto engine = [](const pb::SquareMatrix<pb::PrimeFieldElement>& m) { return pb::permanent_bruteforce(m); };
        pb::OraclePolicy p = policy;
        p.seed = pb::Rng::derive(trial_seed, 0xB);
        auto oracle = pb::make_faulty_oracle<pb::SquareMatrix<pb::PrimeFieldElement>, pb::PrimeFieldElement>(engine, p);
        json row;
        row["seed"] = trial_seed;
        try {
          auto res = pb::lipton_reduce(a, oracle, pb::LiptonConfig{k, repeats, true}, trial_seed);
          row["value"] = res.value.to_string();
          row["truth"] = truth.to_string();
          row["success"] = res.value == truth;
          if (res.value == truth) ++successes;
        } catch (const pb::Error& e) {
          row["success"] = false;
          row["outcome"] = e.what();
        }
        rows.push_back(std::move(row));
        if (trials == 1 && !rows.back()["success"].get<bool>()) {
          emit(out, json{{"rows", rows}});
          return 3;
        }
      }
      auto wilson = pb::wilson_interval(successes, trials);
      json j;
      j["n"] = perm_n;
      j["q"] = perm_q;
      j["k"] = k;
      j["repeats"] = repeats;
      j["trials"] = trials;
      j["successes"] = successes;
      j["wilson_95"] = json{{"low", wilson.low}, {"high", wilson.high}};
      j["rows"] = std::move(rows);
      emit(out, j);
      return 0;
    }

    if (*c_lemma) {
      if (lemma == "gaussian-tv") return verify_gaussian_tv();
      if (lemma == "degree-bound") return verify_degree_bound(seed);
      if (lemma == "paturi") return verify_paturi();
      return verify_rakhmanov(seed);
    }

    if (*c_bench) return run_bench();
  } catch (const pb::SizeCapExceeded& e) {
    std::cerr << "size cap: " << e.what() << "\n";
    return 4;
  } catch (const pb::DecodingFailure& e) {
    std::cerr << "decoding failure: " << e.what() << "\n";
    return 3;
  } catch (const pb::MajorityTie& e) {
    std::cerr << "majority tie: " << e.what() << "\n";
    return 3;
  } catch (const pb::AllRepeatsFailedDecoding& e) {
    std::cerr << "all repeats failed: " << e.what() << "\n";
    return 3;
  } catch (const pb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

namespace {

int verify_gaussian_tv() {
  bool ok = true;
  std::printf("scale bound: || N(0,(1-eps)) - N(0,1) || <= 2 eps\n");
  for (double eps : {0.1, 0.01, 0.001}) {
    double tv = pb::numeric_tv_scale(eps);
    double bound = 2 * eps;
    ok = ok && tv <= bound;
    std::printf("  eps=%-7g tv=%.8f bound=%.8f margin=%+.3e\n", eps, tv, bound, bound - tv);
  }
  std::printf("shift bound: || N(v,1) - N(0,1) || <= |v|\n");
  pb::Rng rng(1234);
  for (int i = 0; i < 5; ++i) {
    double v = rng.uniform_symmetric() * 2.0;
    double tv = pb::numeric_tv_shift(v);
    double bound = std::abs(v);
    ok = ok && tv <= bound;
    std::printf("  v=%-9.5f tv=%.8f bound=%.8f margin=%+.3e\n", v, tv, bound, bound - tv);
  }
  std::printf(ok ? "gaussian-tv: OK\n" : "gaussian-tv: FAILED\n");
  return ok ? 0 : 1;
}

int verify_degree_bound(std::uint64_t seed) {
  using pb::ComplexRational;
  bool ok = true;
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}}) {
    const std::size_t n_vertices = w * h;
    const int r = static_cast<int>(2 * n_vertices);
    pb::Rng rng(pb::Rng::derive(seed, n_vertices));
    pb::DistributionSpec dist;
    auto shape = pb::empty_peps(pb::LatticeSpec{w, h}, 2, 2);
    auto p = pb::sample_peps_data(shape, dist, rng);
    auto q = pb::sample_peps_data(shape, dist, rng);
    pb::BlendPath<ComplexRational> path{p, q};
    pb::SampleSet<ComplexRational> samples;
    for (int i = 1; i <= r + 6; ++i) {
      pb::Rational t(i, 64);
      samples.push_back({ComplexRational(t), contract_norm(blend(path, t))});
    }
    auto fit = pb::vandermonde_interpolate(samples, r);
    std::size_t hits = 0;
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < samples.size(); ++i) {
      if (fit(samples[i].x) == samples[i].y) ++hits;
    }
    ok = ok && hits == 5;
    std::printf("  %zux%zu lattice: degree<=%d interpolation predicted %zu/5 held-out points exactly\n", w, h, r,
                hits);
  }
  std::printf(ok ? "degree-bound: OK\n" : "degree-bound: FAILED\n");
  return ok ? 0 : 1;
}

int verify_paturi() {
  // Chebyshev growth T_r(1/eps) is the extremal case; the bound must dominate.
  bool ok = true;
  for (int r = 1; r <= 6; ++r) {
    for (double eps : {0.5, 0.25, 0.125}) {
      double x = 1.0 / eps;
      double t_r = std::cosh(r * std::acosh(x));
      auto bound = pb::paturi_bound(pb::Rational(1), r, pb::Rational(1, static_cast<long>(1.0 / eps)));
      ok = ok && bound.dominates(pb::Rational::from_double(t_r));
      std::printf("  r=%d eps=%-6g T_r(1/eps)=%-14.6g bound=%s\n", r, eps, t_r, bound.to_string().c_str());
    }
  }
  std::printf(ok ? "paturi: OK\n" : "paturi: FAILED\n");
  return ok ? 0 : 1;
}

int verify_rakhmanov(std::uint64_t seed) {
  // A unit-bounded degree-r polynomial is sampled at the k = r+1 equidistant
  // points with noise of magnitude <= 2^-40 and re-interpolated; the error
  // polynomial is <= 2^-40 at the nodes, so on the inner interval [-R/2, R/2]
  // the bound (with C = 1) must dominate the actual interpolation error. This
  // is exactly the hand-off used by the noisy-reduction certificate.
  pb::Rng rng(seed ^ 0xabcdef);
  bool ok = true;
  for (int r = 1; r <= 6; ++r) {
    const std::size_t k = static_cast<std::size_t>(r) + 1;
    std::vector<double> xs(k);
    for (std::size_t i = 0; i < k; ++i) {
      xs[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(k - 1);
    }
    double worst_ratio = 0;
    for (int trial = 0; trial < 400; ++trial) {
      std::vector<double> coeff(static_cast<std::size_t>(r) + 1);
      for (auto& c : coeff) c = rng.uniform_symmetric();
      auto eval = [&](double x) {
        double acc = 0;
        for (std::size_t j = coeff.size(); j-- > 0;) acc = acc * x + coeff[j];
        return acc;
      };
      std::vector<double> noisy(k);
      for (std::size_t i = 0; i < k; ++i) noisy[i] = eval(xs[i]) + rng.uniform_symmetric() * 0x1.fp-41;
      // Lagrange interpolation error |q~(x) - p(x)| vs 2^-40 * bound(x)
      const double radius = std::sqrt(1.0 - static_cast<double>(r) * r / (static_cast<double>(k) * k));
      for (int g = -8; g <= 8; ++g) {
        const double x = radius / 2.0 * static_cast<double>(g) / 8.0;
        double interp = 0;
        for (std::size_t j = 0; j < k; ++j) {
          double lj = 1;
          for (std::size_t i = 0; i < k; ++i) {
            if (i != j) lj *= (x - xs[i]) / (xs[j] - xs[i]);
          }
          interp += noisy[j] * lj;
        }
        const double err = std::abs(interp - eval(x));
        auto bound = pb::rakhmanov_bound(static_cast<long>(k), r, pb::Rational::from_double(x), pb::Rational(1));
        const double b = bound.value.to_double() * 0x1p-40 + 0x1p-60;
        worst_ratio = std::max(worst_ratio, err / b);
        if (err > b) ok = false;
      }
    }
    std::printf("  r=%d k=%zu worst interpolation-error/bound on [-R/2,R/2]: %.4f\n", r, k, worst_ratio);
  }
  std::printf(ok ? "rakhmanov: OK\n" : "rakhmanov: FAILED\n");
  return ok ? 0 : 1;
}

int run_bench() {
  using Clock = std::chrono::steady_clock;
  auto millis = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  pb::Rng rng(1);
  pb::DistributionSpec dist;
  std::printf("%-34s %10s\n", "kernel", "ms/op");
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 3}}) {
    auto shape = pb::empty_peps(pb::LatticeSpec{w, h}, 2, 2);
    auto p = pb::sample_peps_data(shape, dist, rng);
    auto q = pb::sample_peps_data(shape, dist, rng);
    pb::BlendPath<pb::ComplexRational> path{p, q};
    auto t0 = Clock::now();
    const int reps = 20;
    for (int i = 0; i < reps; ++i) (void)contract_norm(blend(path, pb::Rational(i + 1, 64)));
    auto t1 = Clock::now();
    std::printf("contract_norm %zux%zu %18.3f\n", w, h, millis(t0, t1) / reps);
    t0 = Clock::now();
    for (int i = 0; i < reps; ++i) (void)contraction_polynomial(path);
    t1 = Clock::now();
    std::printf("contraction_polynomial %zux%zu %9.3f\n", w, h, millis(t0, t1) / reps);
  }
  {
    auto shape = pb::empty_peps(pb::LatticeSpec{2, 3}, 2, 2);
    auto p = pb::sample_peps_data(shape, dist, rng);
    auto q = pb::sample_peps_data(shape, dist, rng);
    pb::BlendPath<pb::ComplexRational> path{p, q};
    auto poly = pb::contraction_polynomial(path);
    auto eps = pb::epsilon_for(2, 2, 6).eps;
    auto pts = pb::choose_sample_points(pb::SampleVariant::Exact, 120, eps);
    pb::SampleSet<pb::ComplexRational> samples;
    for (const auto& t : pts) samples.push_back({pb::ComplexRational(t), poly(pb::ComplexRational(t))});
    pb::Rng crng(7);
    auto bad = samples;
    for (auto& s : bad) {
      if (crng.bernoulli(0.2)) s.y += pb::ComplexRational(pb::Rational(1, 3));
    }
    auto t0 = Clock::now();
    (void)pb::berlekamp_welch(bad, 12);
    auto t1 = Clock::now();
    std::printf("%-34s %10.3f\n", "berlekamp_welch k=120 r=12 (Q(i))", millis(t0, t1));
  }
  return 0;
}

}  // namespace
