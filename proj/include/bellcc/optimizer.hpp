#pragma once

// See-saw maximization of Bell values over qubit strategies.
//
// With everything else fixed, the Bell value is affine in the Bloch vector r
// of any single observable slot: B = c + r . g, where g_j is the Bell value
// with sigma_j substituted into that slot (restricted to the input tuples
// that select it). The update r <- g / |g| is therefore the exact per-slot
// maximum, which makes every sweep monotone.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bellcc/core.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc {

struct OptimizerOptions {
  unsigned restarts = 32;
  unsigned max_sweeps = 500;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  bool optimize_state = false;
  Parallelism parallelism{};

  void validate() const {
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    if (max_sweeps < 1) throw ValidationError("max_sweeps must be at least 1");
    if (!(tol > 0)) throw ValidationError("tol must be positive");
  }
};

struct OptimizationResult {
  double best_value = 0;
  QuantumStrategy strategy;
  unsigned sweeps_used = 0;
  unsigned best_restart = 0;
  /// Bell value before the first sweep followed by the value after each sweep.
  std::vector<double> value_trace;
  /// Slot updates skipped because the gradient vanished (|g| < 1e-14).
  std::size_t degenerate_updates = 0;
};

/// Bell operator sum_x Q(x) (x)_i A_i^{x|V_i}.
inline OperatorN bell_operator(const BellInequality& ineq, const std::vector<std::vector<Observable2>>& observables) {
  const auto& sc = ineq.scenario();
  const std::size_t d = sc.tuple_count();
  OperatorN op(d);
  std::vector<Matrix2> f(sc.parties());
  for (TupleIndex x = 0; x < d; ++x) {
    const double q = ineq.coeff(x);
    if (q == 0) continue;
    for (unsigned i = 0; i < sc.parties(); ++i) f[i] = observables.at(i).at(sc.setting_index(i, x)).matrix();
    op += Complex{q} * tensor_product(f);
  }
  return op;
}

struct StateOptimum {
  PureState state;
  double value;
  std::size_t iterations;
};

inline constexpr std::size_t kPowerIterationLimit = 10000;

/// Top eigenpair of the Bell operator by power iteration on (B + Gamma I),
/// which is positive semidefinite because |B| <= Gamma.
inline StateOptimum optimal_state(const BellInequality& ineq, const std::vector<std::vector<Observable2>>& observables,
                                  double tol = 1e-12) {
  const OperatorN b = bell_operator(ineq, observables);
  const std::size_t d = b.dim();
  const double shift = ineq.gamma();
  Xoshiro256 rng(0x5EED0F5EEDull);
  std::vector<Complex> v(d);
  for (auto& c : v) c = Complex{rng.uniform() + 0.5, rng.uniform() - 0.5};
  double nrm = std::sqrt(squared_norm(v));
  for (auto& c : v) c /= nrm;

  double lambda = -std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= kPowerIterationLimit; ++it) {
    std::vector<Complex> w = b.apply(v);
    const double rayleigh = inner(v, w).real();
    for (std::size_t i = 0; i < d; ++i) w[i] += shift * v[i];
    nrm = std::sqrt(squared_norm(w));
    if (!(nrm > 0)) throw NumericError("power iteration collapsed to the zero vector");
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / nrm;
    if (std::abs(rayleigh - lambda) <= tol * std::max(1.0, std::abs(rayleigh))) {
      PureState psi(v);
      const double value = inner(v, b.apply(v)).real();
      return {std::move(psi), value, it};
    }
    lambda = rayleigh;
  }
  throw ConvergenceError("power iteration did not converge", kPowerIterationLimit);
}

namespace detail {

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<Observable2>> observables;
  std::optional<State> state;
  std::vector<double> trace;
  unsigned sweeps = 0;
  std::size_t degenerate = 0;
};

inline double strategy_value(const BellInequality& ineq, const State& state,
                             const std::vector<std::vector<Observable2>>& obs) {
  const auto& sc = ineq.scenario();
  double v = 0;
  std::vector<Matrix2> f(sc.parties());
  for (TupleIndex x = 0; x < sc.tuple_count(); ++x) {
    const double q = ineq.coeff(x);
    if (q == 0) continue;
    for (unsigned i = 0; i < sc.parties(); ++i) f[i] = obs[i][sc.setting_index(i, x)].matrix();
    v += q * expectation_product(state, f);
  }
  return v;
}

// One pass over every (party, setting) slot; returns the number of skipped slots.
inline std::size_t seesaw_sweep(const BellInequality& ineq, const State& state, std::vector<std::vector<Observable2>>& obs) {
  const auto& sc = ineq.scenario();
  const unsigned n = sc.parties();
  std::size_t skipped = 0;
  std::vector<Matrix2> f(n);
  for (unsigned p = 0; p < n; ++p)
    for (std::uint32_t k = 0; k < sc.setting_count(p); ++k) {
      std::array<double, 3> g{0, 0, 0};
      for (TupleIndex x = 0; x < sc.tuple_count(); ++x) {
        if (sc.setting_index(p, x) != k) continue;
        const double q = ineq.coeff(x);
        if (q == 0) continue;
        for (unsigned i = 0; i < n; ++i) f[i] = obs[i][sc.setting_index(i, x)].matrix();
        for (int j = 0; j < 3; ++j) {
          f[p] = pauli::xyz[j];
          g[j] += q * expectation_product(state, f);
        }
      }
      const double gn = std::hypot(g[0], g[1], g[2]);
      if (gn < 1e-14) {
        ++skipped;
        continue;
      }
      obs[p][k] = Observable2({g[0] / gn, g[1] / gn, g[2] / gn});
    }
  return skipped;
}

inline RestartOutcome run_restart(const BellInequality& ineq, const State& initial_state, const OptimizerOptions& opts,
                                  unsigned restart) {
  Xoshiro256 rng(derive_seed(opts.seed, restart));
  RestartOutcome out;
  out.observables = random_observables(ineq.scenario(), rng);
  State state = initial_state;
  double value = strategy_value(ineq, state, out.observables);
  out.trace.push_back(value);
  for (unsigned sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    out.degenerate += seesaw_sweep(ineq, state, out.observables);
    double next = strategy_value(ineq, state, out.observables);
    if (opts.optimize_state) {
      auto opt = optimal_state(ineq, out.observables);
      // keep the previous state unless the eigenvector is at least as good
      if (opt.value >= next) {
        state = std::move(opt.state);
        next = strategy_value(ineq, state, out.observables);
      }
    }
    out.trace.push_back(next);
    out.sweeps = sweep;
    const bool converged = next - value < opts.tol;
    value = next;
    if (converged) break;
  }
  out.value = value;
  out.state = std::move(state);
  return out;
}

inline OptimizationResult best_of_restarts(const BellInequality& ineq, const State& initial_state,
                                           const OptimizerOptions& opts) {
  opts.validate();
  if (qubits(initial_state) != ineq.parties()) throw ValidationError("state dimension does not match the scenario");
  std::vector<RestartOutcome> outcomes(opts.restarts);
  parallel_chunks(opts.restarts, opts.restarts, opts.parallelism, [&](std::size_t b, std::size_t e, std::size_t) {
    for (std::size_t r = b; r < e; ++r) outcomes[r] = run_restart(ineq, initial_state, opts, static_cast<unsigned>(r));
  });
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) top = std::max(top, o.value);
  std::size_t chosen = 0;
  while (outcomes[chosen].value < top - 1e-12) ++chosen;
  auto& o = outcomes[chosen];
  std::size_t degenerate = 0;
  for (const auto& r : outcomes) degenerate += r.degenerate;
  OptimizationResult res{o.value,
                         QuantumStrategy(ineq.scenario(), std::move(*o.state), std::move(o.observables)),
                         o.sweeps,
                         static_cast<unsigned>(chosen),
                         std::move(o.trace),
                         degenerate};
  return res;
}

}  // namespace detail

/// See-saw over observables with the state held fixed.
inline OptimizationResult seesaw_measurements(const BellInequality& ineq, const State& state, OptimizerOptions opts) {
  opts.optimize_state = false;
  return detail::best_of_restarts(ineq, state, opts);
}

/// Full optimization from GHZ(n); alternates with top-eigenvector state
/// updates when opts.optimize_state is set.
inline OptimizationResult optimize(const BellInequality& ineq, const OptimizerOptions& opts) {
  if (ineq.parties() > kMaxParties) throw ValidationError("optimizer supports at most 6 parties");
  return detail::best_of_restarts(ineq, ghz_state(ineq.parties()), opts);
}

}  // namespace bellcc
