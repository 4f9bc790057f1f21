#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "bellcc/optimizer.hpp"

using namespace bellcc;
using Catch::Matchers::WithinAbs;

namespace {

double top_eigenvalue(const OperatorN& op) {
  Eigen::MatrixXcd e(op.dim(), op.dim());
  for (std::size_t r = 0; r < op.dim(); ++r)
    for (std::size_t c = 0; c < op.dim(); ++c) e(r, c) = op(r, c);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(e).eigenvalues().maxCoeff();
}

// CHSH on GHZ(2) with equatorial settings: E(a, b) = cos(a + b). With a0 = 0
// fixed (only a + b matters), the optimum over a1 is |e^{i b0} - e^{i b1}|.
double chsh_grid_oracle() {
  const double step = 0.001;
  const int steps = static_cast<int>(2 * M_PI / step) + 1;
  double best = -10;
  for (int i = 0; i < steps; ++i) {
    const double b0 = i * step;
    for (int j = 0; j < steps; ++j) {
      const double b1 = j * step;
      const double v = std::cos(b0) + std::cos(b1) + std::hypot(std::cos(b0) - std::cos(b1), std::sin(b0) - std::sin(b1));
      best = std::max(best, v);
    }
  }
  return best;
}

OptimizerOptions opts_with(std::uint64_t seed, unsigned restarts = 32) {
  OptimizerOptions o;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

}  // namespace

TEST_CASE("see-saw reaches the published quantum values", "[optimizer]") {
  const auto g = optimize(gyni_inequality(), opts_with(1));
  CHECK(g.best_value >= 7.3909);
  CHECK(g.best_value <= 7.3931 + 1e-6);
  const auto s = optimize(svetlichny_inequality(), opts_with(1));
  CHECK_THAT(s.best_value, WithinAbs(4 * std::sqrt(2.0), 1e-6));
}

TEST_CASE("CHSH optimum matches a planar-angle grid", "[optimizer]") {
  const double grid = chsh_grid_oracle();
  const auto r = optimize(chsh_inequality(), opts_with(3));
  CHECK_THAT(r.best_value, WithinAbs(2 * std::sqrt(2.0), 1e-6));
  CHECK_THAT(r.best_value, WithinAbs(grid, 1e-5));
  CHECK(r.best_value >= grid - 1e-9);
}

TEST_CASE("value traces never decrease", "[optimizer]") {
  for (const auto& ineq : {gyni_inequality(), svetlichny_inequality(), chsh_inequality()})
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto r = optimize(ineq, opts_with(seed, 1));
      REQUIRE(r.value_trace.size() >= 2);
      for (std::size_t i = 1; i < r.value_trace.size(); ++i) CHECK(r.value_trace[i] >= r.value_trace[i - 1] - 1e-12);
    }
}

TEST_CASE("returned strategies reproduce the reported value", "[optimizer]") {
  for (const auto& ineq : {gyni_inequality(), svetlichny_inequality()}) {
    const auto r = optimize(ineq, opts_with(5, 8));
    CHECK_THAT(bell_value(r.strategy, ineq), WithinAbs(r.best_value, 1e-9));
    CHECK(r.best_value <= ineq.gamma() + 1e-9);
  }
}

TEST_CASE("optimization is deterministic and thread-independent", "[optimizer]") {
  auto a = opts_with(42, 6), b = opts_with(42, 6);
  a.parallelism.threads = 1;
  b.parallelism.threads = 4;
  const auto ra = optimize(gyni_inequality(), a), rb = optimize(gyni_inequality(), b);
  CHECK(ra.value_trace == rb.value_trace);
  CHECK(ra.best_restart == rb.best_restart);
  CHECK(ra.strategy.observables == rb.strategy.observables);
}

TEST_CASE("state updates keep the value monotone", "[optimizer]") {
  auto o = opts_with(7, 4);
  o.optimize_state = true;
  const auto r = optimize(gyni_inequality(), o);
  for (std::size_t i = 1; i < r.value_trace.size(); ++i) CHECK(r.value_trace[i] >= r.value_trace[i - 1] - 1e-12);
  CHECK(r.best_value >= 7.3909);
  CHECK(r.best_value <= 7.3931 + 1e-6);
}

TEST_CASE("measurement see-saw on a fixed mixed state", "[optimizer]") {
  const auto r = seesaw_measurements(svetlichny_inequality(), depolarize(ghz_state(3), 0.5), opts_with(2, 8));
  CHECK_THAT(r.best_value, WithinAbs(0.5 * 4 * std::sqrt(2.0), 1e-6));
}

TEST_CASE("top eigenvector of the Bell operator", "[optimizer]") {
  const auto gi = gyni_inequality();
  const auto gs = gyni_paper_strategy();
  const auto g = optimal_state(gi, gs.observables);
  CHECK(g.value >= 7.3909);
  CHECK_THAT(g.value, WithinAbs(top_eigenvalue(bell_operator(gi, gs.observables)), 1e-9));
  const double fidelity = std::norm(inner(ghz_state(3).amplitudes(), g.state.amplitudes()));
  CHECK(fidelity >= 1 - 1e-6);

  const auto s = optimal_state(svetlichny_inequality(), svetlichny_paper_strategy().observables);
  CHECK_THAT(s.value, WithinAbs(4 * std::sqrt(2.0), 1e-9));

  const BellInequality trivial(standard_scenario(2), {1, 1, 1, 1});
  const std::vector<std::vector<Observable2>> zs(2, std::vector<Observable2>(2, Observable2({0, 0, 1})));
  const auto t = optimal_state(trivial, zs);
  CHECK_THAT(t.value, WithinAbs(4.0, 1e-9));
  // the +4 eigenspace is spanned by |00> and |11>
  CHECK_THAT(std::norm(t.state.amplitudes()[0]) + std::norm(t.state.amplitudes()[3]), WithinAbs(1.0, 1e-9));
}

TEST_CASE("Bell operator matches correlators", "[optimizer]") {
  Xoshiro256 rng(6);
  const auto q = random_quantum_strategy(gyni_scenario(), rng);
  const auto op = bell_operator(gyni_inequality(), q.observables);
  CHECK(op.is_hermitian());
  CHECK_THAT(expectation(q.state, op), WithinAbs(bell_value(q, gyni_inequality()), 1e-12));
}

TEST_CASE("constant positive coefficients reach gamma", "[optimizer]") {
  const BellInequality ineq(standard_scenario(3), std::vector<double>(8, 0.5));
  const auto r = optimize(ineq, opts_with(11, 4));
  CHECK_THAT(r.best_value, WithinAbs(ineq.gamma(), 1e-6));
}

TEST_CASE("optimizer options are validated", "[optimizer]") {
  auto o = opts_with(1);
  o.restarts = 0;
  CHECK_THROWS_AS(optimize(gyni_inequality(), o), ValidationError);
  o = opts_with(1);
  o.tol = 0;
  CHECK_THROWS_AS(optimize(gyni_inequality(), o), ValidationError);
  CHECK_THROWS_AS(seesaw_measurements(gyni_inequality(), ghz_state(2), opts_with(1)), ValidationError);
}
