#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pepsblend/reduction.hpp"
#include "pepsblend/serialize.hpp"

namespace pepsblend {

// Experiment orchestration: many independent reduction trials, each a pure
// function of (config, master seed, trial index), aggregated with a Wilson
// interval and written out as CSV or JSON. Outputs carry no timestamps so a
// given (config, seed) pair always produces byte-identical artifacts.
struct ExperimentConfig {
  enum class Source { Random, Cluster, File };
  Source source = Source::Random;
  std::string instance_path;
  LatticeSpec lattice{2, 3};
  std::size_t d = 2;
  std::size_t D = 2;
  bool target_translation_invariant = false;
  DistributionSpec dist;
  ReductionConfig reduction;
  OraclePolicy policy;
  std::optional<LocalObservable<ComplexRational>> observable;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t parallel = 1;

  void validate() const {
    dist.validate();
    policy.validate();
    if (source == Source::File && instance_path.empty()) throw ConfigInvalid("missing instance path");
    if ((reduction.variant == ReductionVariant::Uev || reduction.variant == ReductionVariant::Nev) && !observable) {
      throw ConfigInvalid("uev/nev experiments need an observable");
    }
  }
};

struct TrialRow {
  std::uint64_t seed = 0;
  std::string variant;
  std::size_t N = 0, D = 0, d = 0, k = 0, m = 0;
  double failure_rate = 0;
  bool success = false;
  std::string value_re, value_im;  // "p/q", empty on failure
  std::string bound;               // noisy variant certificate
  std::string outcome;
};

struct WilsonInterval {
  double low = 0, high = 0;
};

// 95% Wilson score interval for a binomial rate.
inline WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0, 0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = p + z2 / (2 * n);
  const double spread = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  const double low = successes == 0 ? 0.0 : std::max(0.0, (center - spread) / denom);
  const double high = successes == trials ? 1.0 : std::min(1.0, (center + spread) / denom);
  return {low, high};
}

struct ExperimentReport {
  std::vector<TrialRow> rows;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0;
  WilsonInterval wilson;
};

namespace detail {

inline PepsData<ComplexRational> make_target(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                                             const std::optional<PepsData<ComplexRational>>& file_instance) {
  switch (cfg.source) {
    case ExperimentConfig::Source::File:
      return *file_instance;
    case ExperimentConfig::Source::Cluster:
      return build_cluster_peps(cfg.lattice, ComplexRational());
    case ExperimentConfig::Source::Random: {
      Rng rng(Rng::derive(trial_seed, 0x7a5e7));
      DistributionSpec target_dist = cfg.dist;
      target_dist.translation_invariant = cfg.target_translation_invariant;
      return sample_peps_data(empty_peps(cfg.lattice, cfg.d, cfg.D), target_dist, rng);
    }
  }
  throw ConfigInvalid("unknown instance source");
}

inline TrialRow run_trial(const ExperimentConfig& cfg, std::size_t trial,
                          const std::optional<PepsData<ComplexRational>>& file_instance) {
  const std::uint64_t trial_seed = Rng::derive(cfg.master_seed, trial);
  TrialRow row;
  row.seed = trial_seed;
  row.variant = variant_name(cfg.reduction.variant);
  row.failure_rate = cfg.policy.mode == OraclePolicy::Mode::IidFailure ? cfg.policy.failure_probability : 0.0;
  row.m = cfg.reduction.repeats;

  auto target = make_target(cfg, trial_seed, file_instance);
  row.N = target.lattice.vertices();
  row.D = target.D;
  row.d = target.d;

  try {
    switch (cfg.reduction.variant) {
      case ReductionVariant::Exact: {
        auto res = reduce_exact(target, cfg.dist, cfg.policy, cfg.reduction, trial_seed);
        auto truth = contract_norm(target, cfg.reduction.caps);
        row.k = res.report.k;
        row.success = res.value == truth;
        row.value_re = res.value.re().to_string();
        row.value_im = res.value.im().to_string();
        row.outcome = res.report.outcome;
        break;
      }
      case ReductionVariant::Uev: {
        auto res = reduce_uev(target, *cfg.observable, cfg.dist, cfg.policy, cfg.reduction, trial_seed);
        auto truth = contract_uev(target, *cfg.observable, cfg.reduction.caps);
        row.k = res.report.k;
        row.success = res.value == truth;
        row.value_re = res.value.re().to_string();
        row.value_im = res.value.im().to_string();
        row.outcome = res.report.outcome;
        break;
      }
      case ReductionVariant::Nev: {
        auto res = reduce_nev(target, *cfg.observable, cfg.dist, cfg.policy, cfg.reduction, trial_seed);
        auto truth = contract_nev(target, *cfg.observable, cfg.reduction.caps);
        row.k = res.report.k;
        row.success = res.value == truth;
        row.value_re = res.value.re().to_string();
        row.value_im = res.value.im().to_string();
        row.outcome = res.report.outcome;
        break;
      }
      case ReductionVariant::Noisy: {
        auto res = reduce_noisy(target, cfg.dist, cfg.policy, cfg.reduction, trial_seed);
        auto truth = contract_norm(target, cfg.reduction.caps);
        auto diff = res.value - truth;
        row.k = res.report.k;
        // success: the certificate holds around the true value
        row.success = diff.im().is_zero() && res.bound.dominates(diff.re().abs());
        row.value_re = res.value.re().to_string();
        row.value_im = res.value.im().to_string();
        row.bound = res.bound.to_string();
        row.outcome = res.report.outcome;
        break;
      }
    }
  } catch (const Error& e) {
    row.success = false;
    row.outcome = e.what();
  }
  return row;
}

}  // namespace detail

// Runs all trials (in parallel up to cfg.parallel threads; per-trial RNG is
// derived from the master seed and trial index, so scheduling cannot change
// any result) and aggregates the success statistics.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<PepsData<ComplexRational>> file_instance;
  if (cfg.source == ExperimentConfig::Source::File) {
    auto inst = peps_from_json(load_json_file(cfg.instance_path));
    if (!std::holds_alternative<PepsData<ComplexRational>>(inst)) {
      throw ConfigInvalid("reduction experiments need a complex-rational instance");
    }
    file_instance = std::get<PepsData<ComplexRational>>(inst);
  }

  ExperimentReport report;
  report.trials = cfg.trials;
  report.rows.resize(cfg.trials);

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.parallel, cfg.trials ? cfg.trials : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) report.rows[i] = detail::run_trial(cfg, i, file_instance);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cfg.trials) return;
          report.rows[i] = detail::run_trial(cfg, i, file_instance);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& row : report.rows) {
    if (row.success) ++report.successes;
  }
  report.success_rate = cfg.trials ? static_cast<double>(report.successes) / static_cast<double>(cfg.trials) : 0.0;
  report.wilson = wilson_interval(report.successes, cfg.trials);
  return report;
}

inline std::string experiment_csv(const ExperimentReport& report) {
  std::string out = "seed,variant,N,D,d,k,m,failure_rate,success,value_re,value_im,bound\n";
  char buf[64];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.6g", r.failure_rate);
    out += std::to_string(r.seed) + "," + r.variant + "," + std::to_string(r.N) + "," + std::to_string(r.D) + "," +
           std::to_string(r.d) + "," + std::to_string(r.k) + "," + std::to_string(r.m) + "," + buf + "," +
           (r.success ? "1" : "0") + "," + r.value_re + "," + r.value_im + "," + r.bound + "\n";
  }
  return out;
}

inline json experiment_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j;
    j["seed"] = r.seed;
    j["variant"] = r.variant;
    j["N"] = r.N;
    j["D"] = r.D;
    j["d"] = r.d;
    j["k"] = r.k;
    j["m"] = r.m;
    j["failure_rate"] = r.failure_rate;
    j["success"] = r.success;
    if (!r.value_re.empty()) j["value"] = json{{"re", r.value_re}, {"im", r.value_im}};
    if (!r.bound.empty()) j["bound"] = r.bound;
    j["outcome"] = r.outcome;
    rows.push_back(std::move(j));
  }
  json j;
  j["trials"] = report.trials;
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  j["wilson_95"] = json{{"low", report.wilson.low}, {"high", report.wilson.high}};
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace pepsblend
