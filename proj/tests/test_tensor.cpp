#include <catch2/catch_amalgamated.hpp>

#include "pepsblend/contraction.hpp"
#include "pepsblend/sampling.hpp"

using namespace pepsblend;

namespace {

// Independent nested-loop oracle: sum over every virtual edge configuration,
// accumulating the product of tensor entries into the amplitude vector. Slow
// on purpose; shares no code with the sweep engine.
std::vector<ComplexRational> dense_oracle(const PepsData<ComplexRational>& peps) {
  const auto& lat = peps.lattice;
  const std::size_t n = lat.vertices();
  const std::size_t D = peps.D;
  // enumerate edges as (vertex, Right) and (vertex, Down)
  struct Edge {
    std::size_t a, b;  // a left/up endpoint, b right/down endpoint
    bool horizontal;
  };
  std::vector<Edge> edges;
  for (std::size_t y = 0; y < lat.height; ++y) {
    for (std::size_t x = 0; x < lat.width; ++x) {
      if (x + 1 < lat.width) edges.push_back({lat.vertex(x, y), lat.vertex(x + 1, y), true});
      if (y + 1 < lat.height) edges.push_back({lat.vertex(x, y), lat.vertex(x, y + 1), false});
    }
  }
  std::size_t amp_size = 1;
  for (std::size_t v = 0; v < n; ++v) amp_size *= peps.d;
  std::vector<ComplexRational> amps(amp_size, ComplexRational());
  std::size_t configs = 1;
  for (std::size_t e = 0; e < edges.size(); ++e) configs *= D;

  for (std::size_t phys = 0; phys < amp_size; ++phys) {
    std::vector<std::size_t> s(n);
    std::size_t rest = phys;
    for (std::size_t v = n; v-- > 0;) {
      s[v] = rest % peps.d;
      rest /= peps.d;
    }
    ComplexRational total;
    for (std::size_t cfg = 0; cfg < configs; ++cfg) {
      // leg values per vertex in normative order U,R,D,L
      std::vector<std::size_t> bond(edges.size());
      std::size_t c = cfg;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        bond[e] = c % D;
        c /= D;
      }
      ComplexRational prod(1);
      for (std::size_t y = 0; y < lat.height && !prod.is_zero(); ++y) {
        for (std::size_t x = 0; x < lat.width && !prod.is_zero(); ++x) {
          const std::size_t v = lat.vertex(x, y);
          std::size_t idx = s[v];
          for (Leg l : kLegOrder) {
            if (!lat.has_leg(x, y, l)) continue;
            std::size_t value = 0;
            for (std::size_t e = 0; e < edges.size(); ++e) {
              const auto& ed = edges[e];
              const bool match = (l == Leg::Right && ed.horizontal && ed.a == v) ||
                                 (l == Leg::Left && ed.horizontal && ed.b == v) ||
                                 (l == Leg::Down && !ed.horizontal && ed.a == v) ||
                                 (l == Leg::Up && !ed.horizontal && ed.b == v);
              if (match) {
                value = bond[e];
                break;
              }
            }
            idx = idx * D + value;
          }
          prod *= peps.tensors[v][idx];
        }
      }
      total += prod;
    }
    amps[phys] = total;
  }
  return amps;
}

ComplexRational dense_norm(const std::vector<ComplexRational>& amps) {
  ComplexRational acc;
  for (const auto& a : amps) acc += a * a.conj();
  return acc;
}

PepsData<ComplexRational> random_instance(Rng& rng, std::size_t w, std::size_t h, unsigned bits = 10) {
  DistributionSpec dist;
  dist.bits = bits;
  return sample_peps_data(empty_peps(LatticeSpec{w, h}, 2, 2), dist, rng);
}

}  // namespace

TEST_CASE("peps validation") {
  auto peps = empty_peps(LatticeSpec{2, 2}, 2, 2);
  peps.validate();
  peps.tensors[1].pop_back();
  CHECK_THROWS_AS(peps.validate(), ShapeMismatch);
  LatticeSpec degenerate{0, 3};
  CHECK_THROWS_AS(degenerate.validate(), ConfigInvalid);
}

TEST_CASE("build_state_vector on degenerate lattices") {
  SECTION("1x1: amplitudes are the physical vector itself") {
    auto peps = empty_peps(LatticeSpec{1, 1}, 2, 1);
    peps.tensors[0] = {ComplexRational(Rational(2, 3)), ComplexRational{Rational(1), Rational(-1, 2)}};
    auto amps = build_state_vector(peps);
    CHECK(amps == peps.tensors[0]);
    // contract_norm = sum |v_i|^2
    auto norm = contract_norm(peps);
    CHECK(norm == dense_norm(amps));
  }
  SECTION("1x2 with D = 1: tensor product") {
    auto peps = empty_peps(LatticeSpec{1, 2}, 2, 1);
    ComplexRational u0(Rational(1, 2)), u1(Rational(3)), v0{Rational(0), Rational(1)}, v1(Rational(-2));
    peps.tensors[0] = {u0, u1};
    peps.tensors[1] = {v0, v1};
    auto amps = build_state_vector(peps);
    REQUIRE(amps.size() == 4);
    CHECK(amps[0] == u0 * v0);
    CHECK(amps[1] == u0 * v1);
    CHECK(amps[2] == u1 * v0);
    CHECK(amps[3] == u1 * v1);
  }
  SECTION("2x2 small-integer tensors match the nested-loop oracle") {
    Rng rng(55);
    auto peps = empty_peps(LatticeSpec{2, 2}, 2, 2);
    for (auto& t : peps.tensors) {
      for (auto& z : t) z = ComplexRational(Rational(static_cast<long>(rng.below(7)) - 3));
    }
    CHECK(build_state_vector(peps) == dense_oracle(peps));
  }
  SECTION("size caps") {
    auto wide = empty_peps(LatticeSpec{7, 1}, 2, 2);
    CHECK_THROWS_AS(contract_norm(wide), SizeCapExceeded);
    CHECK_THROWS_AS(build_state_vector(wide), SizeCapExceeded);
    ContractionCaps tiny;
    tiny.max_dense = 4;
    auto small = empty_peps(LatticeSpec{2, 2}, 2, 2);
    CHECK_THROWS_AS(build_state_vector(small, tiny), SizeCapExceeded);
  }
}

TEST_CASE("contract_norm equals the dense inner product") {
  Rng rng(123);
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}, {2, 3}, {3, 2}}) {
    for (int rep = 0; rep < 3; ++rep) {
      auto peps = random_instance(rng, w, h);
      auto norm = contract_norm(peps);
      CHECK(norm == dense_norm(build_state_vector(peps)));
      CHECK(norm.im().is_zero());
      CHECK(norm.re().sign() >= 0);
    }
  }
  SECTION("3x3 random dyadic tensors") {
    auto peps = random_instance(rng, 3, 3, 8);
    CHECK(contract_norm(peps) == dense_norm(build_state_vector(peps)));
  }
}

TEST_CASE("contract_norm over a prime field uses the bilinear pairing") {
  Rng rng(88);
  auto peps_c = random_instance(rng, 2, 2, 4);
  PepsData<PrimeFieldElement> peps;
  peps.lattice = peps_c.lattice;
  peps.d = 2;
  peps.D = 2;
  for (const auto& t : peps_c.tensors) {
    std::vector<PrimeFieldElement> row;
    for (std::size_t i = 0; i < t.size(); ++i) row.emplace_back(rng.below(101), 101);
    peps.tensors.push_back(std::move(row));
  }
  auto norm = contract_norm(peps);
  // oracle: sum of squared amplitudes from the generic dense engine
  auto amps = build_state_vector(peps);
  PrimeFieldElement acc(0, 101);
  for (const auto& a : amps) acc += a * a;
  CHECK(norm == acc);
}

TEST_CASE("scaling one vertex tensor scales the norm by |lambda|^2") {
  Rng rng(321);
  auto peps = random_instance(rng, 2, 2);
  auto norm = contract_norm(peps);
  ComplexRational lambda{Rational(3, 2), Rational(-1, 3)};
  auto scaled = peps;
  for (auto& z : scaled.tensors[2]) z = z * lambda;
  CHECK(contract_norm(scaled) == norm * ComplexRational(lambda.norm2()));
}

TEST_CASE("contract_uev") {
  Rng rng(99);
  auto peps = random_instance(rng, 2, 2);
  auto norm = contract_norm(peps);
  SECTION("identity gives the norm, zero gives zero") {
    auto id = identity_observable<ComplexRational>(1, 2, ComplexRational());
    CHECK(contract_uev(peps, id) == norm);
    auto zero = id;
    for (auto& z : zero.matrix) z = ComplexRational();
    CHECK(contract_uev(peps, zero) == ComplexRational());
  }
  SECTION("single-site diag(1,0) against the dense oracle") {
    LocalObservable<ComplexRational> obs;
    obs.support = {1};
    obs.matrix = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
    auto amps = dense_oracle(peps);
    // <psi|A|psi> with A = |0><0| on site 1: keep amplitudes whose s_1 = 0
    ComplexRational expect;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
      const std::size_t s1 = (idx >> 2) & 1;  // vertex order: s_0 slowest
      if (s1 == 0) expect += amps[idx].conj() * amps[idx];
    }
    CHECK(contract_uev(peps, obs) == expect);
  }
  SECTION("two-site observable against the dense oracle") {
    // support {0, 3} (non-adjacent), dense random matrix
    LocalObservable<ComplexRational> obs;
    obs.support = {0, 3};
    for (int i = 0; i < 16; ++i) {
      obs.matrix.push_back({Rational(static_cast<long>(rng.below(11)) - 5, 2),
                            Rational(static_cast<long>(rng.below(11)) - 5, 3)});
    }
    auto amps = dense_oracle(peps);
    ComplexRational expect;
    for (std::size_t sb = 0; sb < amps.size(); ++sb) {
      for (std::size_t sk = 0; sk < amps.size(); ++sk) {
        // equality off the support
        if (((sb >> 1) & 3) != ((sk >> 1) & 3)) continue;  // s_1 s_2 agree
        const std::size_t b0 = (sb >> 3) & 1, b3 = sb & 1;
        const std::size_t k0 = (sk >> 3) & 1, k3 = sk & 1;
        expect += amps[sb].conj() * obs.matrix[(b0 * 2 + b3) * 4 + (k0 * 2 + k3)] * amps[sk];
      }
    }
    CHECK(contract_uev(peps, obs) == expect);
  }
  SECTION("support validation") {
    LocalObservable<ComplexRational> bad;
    bad.support = {9};
    bad.matrix.assign(4, ComplexRational());
    CHECK_THROWS_AS(contract_uev(peps, bad), SupportOutOfRange);
  }
}

TEST_CASE("contract_nev") {
  Rng rng(14);
  auto peps = random_instance(rng, 2, 2);
  auto id = identity_observable<ComplexRational>(0, 2, ComplexRational());
  SECTION("identity normalizes to 1") { CHECK(contract_nev(peps, id) == ComplexRational(1)); }
  SECTION("scalar operator c * 1 gives c") {
    ComplexRational c{Rational(5, 7), Rational(2)};
    auto obs = id;
    for (auto& z : obs.matrix) z = z * c;
    CHECK(contract_nev(peps, obs) == c);
  }
  SECTION("random instance equals the ratio of the dense-oracle values") {
    LocalObservable<ComplexRational> obs;
    obs.support = {1};
    obs.matrix = {ComplexRational(Rational(1, 2)), ComplexRational{Rational(0), Rational(1)},
                  ComplexRational{Rational(0), Rational(-1)}, ComplexRational(Rational(-3))};
    auto amps = dense_oracle(peps);
    ComplexRational num;
    for (std::size_t sb = 0; sb < amps.size(); ++sb) {
      for (std::size_t sk = 0; sk < amps.size(); ++sk) {
        if ((sb & 0xBu) != (sk & 0xBu)) continue;  // sites 0, 2, 3 agree (bits 3, 1, 0)
        num += amps[sb].conj() * obs.matrix[((sb >> 2) & 1) * 2 + ((sk >> 2) & 1)] * amps[sk];
      }
    }
    CHECK(contract_nev(peps, obs) == num / dense_norm(amps));
  }
  SECTION("zero norm is rejected") {
    auto zero = empty_peps(LatticeSpec{1, 2}, 2, 2);
    CHECK_THROWS_AS(contract_nev(zero, id), ZeroNorm);
  }
}

TEST_CASE("cluster-state PEPS") {
  SECTION("bond dimension is 2 and entries lie in {0, +-1}") {
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 2}, {3, 2}, {2, 3}}) {
      auto cl = build_cluster_peps(LatticeSpec{w, h}, ComplexRational());
      CHECK(cl.D == 2);
      for (const auto& t : cl.tensors) {
        for (const auto& z : t) {
          CHECK(z.im().is_zero());
          CHECK((z.re() == Rational(0) || z.re() == Rational(1) || z.re() == Rational(-1)));
        }
      }
    }
  }
  SECTION("1x1 is |+> up to scale with positive norm") {
    auto cl = build_cluster_peps(LatticeSpec{1, 1}, ComplexRational());
    auto amps = build_state_vector(cl);
    CHECK(amps[0] == amps[1]);
    CHECK(contract_norm(cl).re().sign() > 0);
  }
  SECTION("amplitudes match the controlled-Z circuit oracle") {
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {2, 3}}) {
      LatticeSpec lat{w, h};
      auto cl = build_cluster_peps(lat, ComplexRational());
      auto amps = build_state_vector(cl);
      const std::size_t n = lat.vertices();
      // circuit oracle: CZ on every edge applied to |+>^n (unnormalized:
      // amplitude (-1)^{sum over edges s_u s_v})
      for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::vector<std::size_t> s(n);
        std::size_t rest = idx;
        for (std::size_t v = n; v-- > 0;) {
          s[v] = rest % 2;
          rest /= 2;
        }
        int phase = 0;
        for (std::size_t y = 0; y < h; ++y) {
          for (std::size_t x = 0; x < w; ++x) {
            if (x + 1 < w) phase += static_cast<int>(s[lat.vertex(x, y)] * s[lat.vertex(x + 1, y)]);
            if (y + 1 < h) phase += static_cast<int>(s[lat.vertex(x, y)] * s[lat.vertex(x, y + 1)]);
          }
        }
        CHECK(amps[idx] == ComplexRational(Rational(phase % 2 ? -1 : 1)));
      }
    }
  }
}

TEST_CASE("mps transfer norm") {
  auto diag_mps = [](std::size_t n, const Rational& eta) {
    MpsData<ComplexRational> mps;
    mps.n = n;
    mps.D = 2;
    mps.a0 = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
    mps.a1 = {ComplexRational(eta), ComplexRational(), ComplexRational(), ComplexRational(1)};
    return mps;
  };
  SECTION("(1 + eta^2)^N closed form") {
    for (const auto& eta : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
      Rational expect(1);
      const Rational base = Rational(1) + eta * eta;
      for (std::size_t n = 1; n <= 8; ++n) {
        expect *= base;
        CHECK(mps_transfer_norm(diag_mps(n, eta)) == ComplexRational(expect));
      }
    }
  }
  SECTION("eta = 0 reduces to the product state") {
    CHECK(mps_transfer_norm(diag_mps(5, Rational(0))) == ComplexRational(1));
  }
  SECTION("eta = 1, N = 3 gives 8") {
    CHECK(mps_transfer_norm(diag_mps(3, Rational(1))) == ComplexRational(8));
  }
  SECTION("A-family (the product state) has norm 1 as a PEPS too") {
    MpsData<ComplexRational> a;
    a.n = 6;
    a.D = 2;
    a.a0 = {ComplexRational(1), ComplexRational(), ComplexRational(), ComplexRational()};
    a.a1 = {ComplexRational(), ComplexRational(), ComplexRational(), ComplexRational(1)};
    CHECK(mps_transfer_norm(a) == ComplexRational(1));
    CHECK(contract_norm(mps_as_peps(a)) == ComplexRational(1));
  }
  SECTION("agrees with the 1xN PEPS route, generic matrices") {
    Rng rng(17);
    for (std::size_t n = 1; n <= 8; ++n) {
      MpsData<ComplexRational> mps;
      mps.n = n;
      mps.D = 2;
      for (int i = 0; i < 4; ++i) {
        mps.a0.push_back({Rational(static_cast<long>(rng.below(9)) - 4, 2), Rational(static_cast<long>(rng.below(5)) - 2, 3)});
        mps.a1.push_back({Rational(static_cast<long>(rng.below(9)) - 4, 3), Rational(static_cast<long>(rng.below(5)) - 2, 2)});
      }
      CHECK(mps_transfer_norm(mps) == contract_norm(mps_as_peps(mps)));
    }
  }
}

TEST_CASE("translation invariance predicate") {
  Rng rng(44);
  DistributionSpec ti;
  ti.translation_invariant = true;
  auto q = sample_peps_data(empty_peps(LatticeSpec{3, 3}, 2, 2), ti, rng);
  CHECK(is_translation_invariant_data(q));
  q.tensors[1][0] += ComplexRational(1);  // break the degree-3 edge class
  CHECK_FALSE(is_translation_invariant_data(q));
}
