#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pepsblend/interpolate.hpp"
#include "pepsblend/oracle.hpp"
#include "pepsblend/permanent.hpp"

using namespace pepsblend;

namespace {

SquareMatrix<PrimeFieldElement> random_matrix(Rng& rng, std::size_t n, std::uint64_t q) {
  SquareMatrix<PrimeFieldElement> m;
  m.n = n;
  for (std::size_t i = 0; i < n * n; ++i) m.a.emplace_back(rng.below(q), q);
  return m;
}

SquareMatrix<PrimeFieldElement> permute(const SquareMatrix<PrimeFieldElement>& m, const std::vector<std::size_t>& rows,
                                        const std::vector<std::size_t>& cols) {
  SquareMatrix<PrimeFieldElement> out;
  out.n = m.n;
  out.a.assign(m.a.size(), PrimeFieldElement(0, m.a[0].modulus()));
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) out.at(i, j) = m.at(rows[i], cols[j]);
  }
  return out;
}

}  // namespace

TEST_CASE("permanent_bruteforce closed forms") {
  SECTION("identity") {
    for (std::size_t n : {1u, 3u, 5u}) {
      SquareMatrix<PrimeFieldElement> eye;
      eye.n = n;
      eye.a.assign(n * n, PrimeFieldElement(0, 101));
      for (std::size_t i = 0; i < n; ++i) eye.at(i, i) = PrimeFieldElement(1, 101);
      CHECK(permanent_bruteforce(eye) == PrimeFieldElement(1, 101));
    }
  }
  SECTION("2x2: ad + bc") {
    SquareMatrix<PrimeFieldElement> m;
    m.n = 2;
    for (std::uint64_t v : {7ull, 11ull, 13ull, 17ull}) m.a.emplace_back(v, 101);
    CHECK(permanent_bruteforce(m) == PrimeFieldElement(7 * 17 + 11 * 13, 101));
  }
  SECTION("diagonal: product of entries") {
    SquareMatrix<PrimeFieldElement> m;
    m.n = 4;
    m.a.assign(16, PrimeFieldElement(0, 101));
    std::uint64_t prod = 1;
    for (std::size_t i = 0; i < 4; ++i) {
      m.at(i, i) = PrimeFieldElement(3 + 2 * i, 101);
      prod = prod * (3 + 2 * i) % 101;
    }
    CHECK(permanent_bruteforce(m) == PrimeFieldElement(prod, 101));
  }
  SECTION("factorial cap") {
    SquareMatrix<PrimeFieldElement> m;
    m.n = 10;
    m.a.assign(100, PrimeFieldElement(1, 101));
    CHECK_THROWS_AS(permanent_bruteforce(m), SizeCapExceeded);
  }
}

TEST_CASE("permanent invariances (randomized)") {
  Rng rng(61);
  SECTION("row/column permutations preserve the permanent") {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 2 + rng.below(5);
      auto m = random_matrix(rng, n, 101);
      std::vector<std::size_t> rows(n), cols(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = cols[i] = i;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        std::swap(rows[i], rows[i + rng.below(n - i)]);
        std::swap(cols[i], cols[i + rng.below(n - i)]);
      }
      CHECK(permanent_bruteforce(permute(m, rows, cols)) == permanent_bruteforce(m));
    }
  }
  SECTION("multilinearity in a row") {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 2 + rng.below(4);
      auto u = random_matrix(rng, n, 101);
      auto v = u;
      auto sum = u;
      const std::size_t row = rng.below(n);
      for (std::size_t j = 0; j < n; ++j) {
        v.at(row, j) = PrimeFieldElement(rng.below(101), 101);
        sum.at(row, j) = u.at(row, j) + v.at(row, j);
      }
      CHECK(permanent_bruteforce(sum) == permanent_bruteforce(u) + permanent_bruteforce(v));
    }
  }
  SECTION("t -> perm(A + tB) has degree at most n") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rng.below(4);
      auto a = random_matrix(rng, n, 101);
      auto b = random_matrix(rng, n, 101);
      SampleSet<PrimeFieldElement> s;
      for (std::uint64_t t = 0; t <= n + 3; ++t) {
        SquareMatrix<PrimeFieldElement> e;
        e.n = n;
        PrimeFieldElement tt(t, 101);
        for (std::size_t i = 0; i < n * n; ++i) e.a.push_back(a.a[i] + tt * b.a[i]);
        s.push_back({tt, permanent_bruteforce(e)});
      }
      auto fit = vandermonde_interpolate(s, static_cast<int>(n));
      for (std::size_t i = n + 1; i < s.size(); ++i) CHECK(fit(s[i].x) == s[i].y);
    }
  }
  SECTION("E(t) entries are uniform for fixed t != 0 (chi-square)") {
    const std::uint64_t q = 17;
    const PrimeFieldElement t(5, q);
    const PrimeFieldElement a00(12, q);
    std::vector<std::size_t> counts(q, 0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      PrimeFieldElement b(rng.below(q), q);
      counts[(a00 + t * b).value()] += 1;
    }
    double chi2 = 0;
    const double expect = static_cast<double>(draws) / static_cast<double>(q);
    for (std::size_t v = 0; v < q; ++v) {
      const double diff = static_cast<double>(counts[v]) - expect;
      chi2 += diff * diff / expect;
    }
    CHECK(chi2 < 39.3);  // chi-square 0.999 quantile at 16 degrees of freedom
  }
}

TEST_CASE("lipton_reduce") {
  Rng rng(4096);
  auto engine = [](const SquareMatrix<PrimeFieldElement>& m) { return permanent_bruteforce(m); };
  SECTION("exact oracle recovers every instance, n <= 5") {
    for (std::size_t n = 1; n <= 5; ++n) {
      for (int trial = 0; trial < 4; ++trial) {
        auto a = random_matrix(rng, n, 101);
        auto res = lipton_reduce(a, engine, LiptonConfig{4 * n, 15, true}, 100 * n + static_cast<std::uint64_t>(trial));
        CHECK(res.value == permanent_bruteforce(a));
      }
    }
  }
  SECTION("10% i.i.d. failures recover (Monte Carlo)") {
    auto a = random_matrix(rng, 5, 101);
    auto truth = permanent_bruteforce(a);
    int wins = 0;
    for (int trial = 0; trial < 60; ++trial) {
      OraclePolicy p;
      p.mode = OraclePolicy::Mode::IidFailure;
      p.failure_probability = 0.1;
      p.seed = Rng::derive(42, static_cast<std::uint64_t>(trial));
      auto oracle = make_faulty_oracle<SquareMatrix<PrimeFieldElement>, PrimeFieldElement>(engine, p);
      try {
        if (lipton_reduce(a, oracle, LiptonConfig{20, 15, true}, static_cast<std::uint64_t>(trial)).value == truth) {
          ++wins;
        }
      } catch (const Error&) {
      }
    }
    CHECK(wins >= 59);
  }
  SECTION("modulus floor q > k is enforced") {
    auto a = random_matrix(rng, 5, 17);
    CHECK_THROWS_AS(lipton_reduce(a, engine, LiptonConfig{20, 5, true}, 1), ConfigInvalid);
  }
  SECTION("an always-wrong oracle fails loudly, never silently") {
    auto a = random_matrix(rng, 3, 101);
    OraclePolicy p;
    p.mode = OraclePolicy::Mode::IidFailure;
    p.failure_probability = 1.0;
    p.seed = 7;
    auto oracle = make_faulty_oracle<SquareMatrix<PrimeFieldElement>, PrimeFieldElement>(engine, p);
    CHECK_THROWS_AS(lipton_reduce(a, oracle, LiptonConfig{12, 5, true}, 3), Error);
  }
}
