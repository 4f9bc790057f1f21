#include <catch_amalgamated.hpp>

#include <functional>

#include "bellcc/classical.hpp"
#include "bellcc/random.hpp"
#include "bellcc/scenario.hpp"

using namespace bellcc;

namespace {

// Independent brute force: recursive over parties, visible tuples rebuilt
// from the visibility lists rather than the scenario's setting index.
double oracle_bound(const CausalScenario& sc, std::span<const double> q) {
  const unsigned n = sc.parties();
  std::vector<std::vector<int>> tables(n);
  double best = -1e300;
  std::function<void(unsigned)> rec = [&](unsigned p) {
    if (p == n) {
      double v = 0;
      for (TupleIndex x = 0; x < sc.tuple_count(); ++x) {
        const auto xv = tuple_values(n, x);
        int prod = 1;
        for (unsigned i = 0; i < n; ++i) {
          std::vector<int> seen;
          for (unsigned src : sc.visibility(i)) seen.push_back(xv[src]);
          prod *= tables[i][tuple_index(seen)];
        }
        v += q[x] * prod;
      }
      best = std::max(best, v);
      return;
    }
    const std::size_t k = sc.setting_count(p);
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << k); ++t) {
      tables[p].assign(k, 1);
      for (std::size_t s = 0; s < k; ++s)
        if ((t >> s) & 1u) tables[p][s] = -1;
      rec(p + 1);
    }
  };
  rec(0);
  return best;
}

std::vector<double> random_coeffs(Xoshiro256& rng, std::size_t count) {
  std::vector<double> q(count);
  for (auto& v : q) v = std::round((rng.uniform() - 0.5) * 8);
  q[0] = q[0] == 0 ? 1 : q[0];
  return q;
}

CausalScenario random_structure(Xoshiro256& rng) {
  std::vector<std::vector<unsigned>> vis(3);
  for (unsigned i = 0; i < 3; ++i) {
    vis[i].push_back(i + 1);
    for (unsigned j = 0; j < 3; ++j)
      if (j != i && rng.uniform() < 0.4) vis[i].push_back(j + 1);
  }
  return make_scenario(3, vis);
}

}  // namespace

TEST_CASE("Bell values of constant strategies", "[classical]") {
  const auto g = gyni_inequality(), s = svetlichny_inequality();
  CHECK(strategy_bell_value(DeterministicStrategy::constant(g.scenario(), 1), g) == 6);
  CHECK(strategy_bell_value(DeterministicStrategy::constant(s.scenario(), 1), s) == 4);
  CHECK(strategy_bell_value(DeterministicStrategy::constant(g.scenario(), -1), g) == -6);

  Xoshiro256 rng(1);
  for (int k = 0; k < 20; ++k) {
    DeterministicStrategy d, flipped;
    for (unsigned i = 0; i < 3; ++i) {
      const auto r = ResponseFunction::from_index(i, 4, rng() & 15u);
      d.responses.push_back(r);
      auto f = r;
      for (int& a : f.table) a = -a;
      flipped.responses.push_back(f);
    }
    CHECK(strategy_bell_value(flipped, g) == -strategy_bell_value(d, g));
  }
}

TEST_CASE("strategies must match the scenario", "[classical]") {
  auto d = DeterministicStrategy::constant(gyni_scenario(), 1);
  CHECK_THROWS_AS(strategy_bell_value(d, svetlichny_inequality()), ValidationError);
  d.responses[0].table[1] = 0;
  CHECK_THROWS_AS(strategy_bell_value(d, gyni_inequality()), ValidationError);
}

TEST_CASE("published classical bounds", "[classical]") {
  const auto g = classical_bound(gyni_inequality());
  CHECK(g.value == 6);
  CHECK(strategy_bell_value(g.witness, gyni_inequality()) == 6);
  CHECK(g.strategies == (std::uint64_t{1} << 12));
  CHECK(classical_bound(svetlichny_inequality()).value == 4);
  CHECK(classical_bound(chsh_inequality()).value == 2);
  CHECK(classical_success_bound(gyni_inequality()) == 0.875);
  CHECK(classical_success_bound(svetlichny_inequality()) == 0.75);
  const BellInequality trivial(standard_scenario(2), {1, 1, 1, 1});
  CHECK(classical_success_bound(trivial) == 1.0);
}

TEST_CASE("witness is the first maximizer and independent of threads", "[classical]") {
  const auto a = classical_bound(gyni_inequality(), Parallelism{1});
  const auto b = classical_bound(gyni_inequality(), Parallelism{8});
  CHECK(a.witness == b.witness);
  CHECK(a.value == b.value);
}

TEST_CASE("every deterministic GYNI strategy stays below the bound", "[classical]") {
  const auto g = gyni_inequality();
  for (std::uint64_t t = 0; t < 4096; ++t) {
    DeterministicStrategy d;
    for (unsigned i = 0; i < 3; ++i) d.responses.push_back(ResponseFunction::from_index(i, 4, (t >> (4 * i)) & 15u));
    REQUIRE(strategy_bell_value(d, g) <= 6);
  }
}

TEST_CASE("bound agrees with a brute-force oracle", "[classical]") {
  Xoshiro256 rng(77);
  for (int k = 0; k < 20; ++k) {
    const auto sc = random_structure(rng);
    const auto q = random_coeffs(rng, 8);
    CHECK(classical_bound(BellInequality(sc, q)).value == oracle_bound(sc, q));
  }
}

TEST_CASE("cyclic relabeling of GYNI leaves the bound unchanged", "[classical]") {
  // party i -> i+1 (mod 3) maps the structure onto itself; coefficients follow
  const auto g = gyni_inequality();
  Xoshiro256 rng(4);
  for (int k = 0; k < 10; ++k) {
    const auto q = random_coeffs(rng, 8);
    std::vector<double> rotated(8);
    for (TupleIndex x = 0; x < 8; ++x) {
      const auto v = tuple_values(3, x);
      rotated[tuple_index(std::vector<int>{v[2], v[0], v[1]})] = q[x];
    }
    CHECK(classical_bound(BellInequality(g.scenario(), q)).value ==
          classical_bound(BellInequality(g.scenario(), rotated)).value);
  }
}

TEST_CASE("enlarging visibility never lowers the bound", "[classical]") {
  Xoshiro256 rng(2024);
  for (int k = 0; k < 20; ++k) {
    const auto sc = random_structure(rng);
    const auto q = random_coeffs(rng, 8);
    auto vis = sc.visibility();
    std::vector<std::vector<unsigned>> bigger;
    for (auto& v : vis) {
      std::vector<unsigned> b;
      for (unsigned i : v) b.push_back(i + 1);
      bigger.push_back(b);
    }
    // add one missing index to one party, if any
    for (unsigned p = 0; p < 3; ++p) {
      bool added = false;
      for (unsigned j = 1; j <= 3 && !added; ++j)
        if (std::find(bigger[p].begin(), bigger[p].end(), j) == bigger[p].end()) {
          bigger[p].push_back(j);
          added = true;
        }
      if (added) break;
    }
    const auto small = classical_bound(BellInequality(sc, q)).value;
    const auto large = classical_bound(BellInequality(make_scenario(3, bigger), q)).value;
    CHECK(large >= small);
  }
}

TEST_CASE("full visibility reaches gamma", "[classical]") {
  Xoshiro256 rng(31);
  for (int k = 0; k < 20; ++k) {
    const BellInequality ineq(full_visibility_scenario(3), random_coeffs(rng, 8));
    CHECK(classical_bound(ineq).value == ineq.gamma());
  }
}

TEST_CASE("enumeration guard", "[classical]") {
  // 6 parties seeing everything: 6 * 64 table bits
  CHECK_THROWS_AS(classical_bound(BellInequality(full_visibility_scenario(6), std::vector<double>(64, 1.0))),
                  SearchSpaceTooLarge);
}

TEST_CASE("exhaustive CCP search on CHSH", "[classical]") {
  const CcpInstance chsh(chsh_inequality());
  const auto r = ccp_exhaustive_bound(chsh, MessageFamily::full);
  CHECK(r.best == 0.75);
  CHECK(r.strategies == 256);
  CHECK(r.best == classical_success_bound(chsh_inequality()));
  CHECK(ccp_exhaustive_bound(chsh, MessageFamily::product_form).best == 0.75);

  const CcpInstance trivial(BellInequality(standard_scenario(2), {1, 1, 1, 1}));
  CHECK(ccp_exhaustive_bound(trivial, MessageFamily::full).best == 1.0);
}

TEST_CASE("product-form CCP search on GYNI", "[classical]") {
  const auto r = ccp_exhaustive_bound(CcpInstance(gyni_inequality()), MessageFamily::product_form);
  CHECK(r.best == 0.875);
  CHECK(r.strategies == 4096);
  CHECK(ccp_exhaustive_bound(CcpInstance(svetlichny_inequality()), MessageFamily::product_form).best == 0.75);
  CHECK_THROWS_AS(ccp_exhaustive_bound(CcpInstance(gyni_inequality()), MessageFamily::full), SearchSpaceTooLarge);
}

TEST_CASE("CCP search matches the Bell bound on random n=2 instances", "[classical]") {
  Xoshiro256 rng(12);
  for (int k = 0; k < 10; ++k) {
    const BellInequality ineq(standard_scenario(2), random_coeffs(rng, 4));
    const auto r = ccp_exhaustive_bound(CcpInstance(ineq), MessageFamily::full);
    CHECK_THAT(r.best, Catch::Matchers::WithinAbs(classical_success_bound(ineq), 1e-12));
  }
}
