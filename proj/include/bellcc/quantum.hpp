#pragma once

// Quantum strategies: a shared n-qubit state plus, for every party and every
// tuple of inputs that party sees, a binary observable A = M_{+1} - M_{-1}.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bellcc/core.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc {

struct QuantumStrategy {
  CausalScenario scenario;
  State state;
  /// observables[party][setting index]
  std::vector<std::vector<Observable2>> observables;

  QuantumStrategy(CausalScenario sc, State st, std::vector<std::vector<Observable2>> obs)
      : scenario(std::move(sc)), state(std::move(st)), observables(std::move(obs)) {
    validate();
  }

  void validate() const {
    const unsigned n = scenario.parties();
    if (qubits(state) != n)
      throw ValidationError("state has " + std::to_string(qubits(state)) + " qubits but the scenario has " +
                            std::to_string(n) + " parties");
    if (observables.size() != n) throw ValidationError("strategy needs observables for every party");
    for (unsigned i = 0; i < n; ++i)
      if (observables[i].size() != scenario.setting_count(i))
        throw ValidationError("party " + std::to_string(i + 1) + " needs " + std::to_string(scenario.setting_count(i)) +
                              " observables, got " + std::to_string(observables[i].size()));
  }

  const Observable2& observable(unsigned party, TupleIndex x) const {
    return observables[party][scenario.setting_index(party, x)];
  }

  std::vector<Matrix2> factors(TupleIndex x) const {
    std::vector<Matrix2> f;
    for (unsigned i = 0; i < scenario.parties(); ++i) f.push_back(observable(i, x).matrix());
    return f;
  }

  QuantumStrategy with_state(State s) const { return QuantumStrategy(scenario, std::move(s), observables); }
};

/// Full correlators E(x), indexed by lexicographic tuple index.
struct CorrelatorTable {
  std::vector<double> values;

  double operator[](TupleIndex x) const { return values.at(x); }
};

/// E(x) = <(x)_i A_i^{x|V_i}> for every input tuple.
inline CorrelatorTable correlator_table(const QuantumStrategy& strategy) {
  CorrelatorTable t;
  t.values.resize(strategy.scenario.tuple_count());
  for (TupleIndex x = 0; x < t.values.size(); ++x) {
    const auto f = strategy.factors(x);
    const double e = expectation_product(strategy.state, f);
    if (std::abs(e) > 1.0 + kTolerance) throw NumericError("correlator magnitude exceeds 1");
    t.values[x] = e;
  }
  return t;
}

/// B = sum_x Q(x) E(x).
inline double bell_value(const CorrelatorTable& table, const BellInequality& ineq) {
  if (table.values.size() != ineq.scenario().tuple_count())
    throw ValidationError("correlator table does not cover every input tuple");
  double b = 0;
  for (TupleIndex x = 0; x < table.values.size(); ++x) b += ineq.coeff(x) * table.values[x];
  return b;
}

inline double bell_value(const QuantumStrategy& strategy, const BellInequality& ineq) {
  if (!(strategy.scenario == ineq.scenario())) throw ValidationError("strategy and inequality use different scenarios");
  return bell_value(correlator_table(strategy), ineq);
}

/// 1/2 + B / (2 Gamma).
inline double success_probability(double bell_value, double gamma) {
  if (!(gamma > 0)) throw ValidationError("gamma must be positive");
  double p = 0.5 + bell_value / (2.0 * gamma);
  if (p < -kTolerance || p > 1.0 + kTolerance)
    throw NumericError("success probability " + std::to_string(p) + " is outside [0, 1]; inputs are inconsistent");
  return std::clamp(p, 0.0, 1.0);
}

/// p(a|x) for all a in {-1,+1}^n, indexed like input tuples (a_1 most significant).
inline std::vector<double> outcome_distribution(const QuantumStrategy& strategy, TupleIndex x) {
  const unsigned n = strategy.scenario.parties();
  std::vector<std::array<Matrix2, 2>> proj(n);
  for (unsigned i = 0; i < n; ++i) {
    const auto& obs = strategy.observable(i, x);
    proj[i] = {obs.projector(-1), obs.projector(1)};
  }
  std::vector<double> p(std::size_t{1} << n);
  std::vector<Matrix2> f(n);
  for (TupleIndex a = 0; a < p.size(); ++a) {
    for (unsigned i = 0; i < n; ++i) f[i] = proj[i][(a >> (n - 1 - i)) & 1u];
    double v;
    if (const auto* pure = std::get_if<PureState>(&strategy.state)) {
      std::vector<Complex> phi(pure->amplitudes().begin(), pure->amplitudes().end());
      for (unsigned i = 0; i < n; ++i) apply_local(phi, n, i, f[i]);
      v = squared_norm(phi);
    } else {
      v = expectation_product(strategy.state, f);
    }
    if (v < -kTolerance) throw NumericError("negative outcome probability " + std::to_string(v));
    p[a] = std::max(v, 0.0);
  }
  return p;
}

/// Parity of an outcome tuple index: product of all a_i.
inline int outcome_parity(unsigned n, TupleIndex a) {
  // a_i = -1 exactly where the bit is clear
  const int negatives = static_cast<int>(n) - std::popcount(a);
  return (negatives % 2) ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Published strategies.

/// Visibility that maps the ideal GYNI value onto the measured 7.023.
inline constexpr double kExperimentLikeVisibility = 7.023 / 7.3909;

namespace detail {
inline Observable2 bloch(double x, double y, double z = 0) { return bloch_to_observable({x, y, z}); }
}  // namespace detail

/// GHZ(3) with the optimized GYNI settings. Keys follow each party's visibility
/// order: Alice (x1,x3), Bob (x2,x1), Charlie (x3,x2); setting index order is
/// (-,-), (-,+), (+,-), (+,+).
inline QuantumStrategy gyni_paper_strategy() {
  using detail::bloch;
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<Observable2>> obs{
      // Alice
      {bloch(0, 1), bloch(1, 0), bloch(0, -1), bloch(0, 1)},
      // Bob
      {bloch(-r, r), bloch(0, 1), bloch(-r, r), bloch(1, 0)},
      // Charlie
      {bloch(0.92, -0.38), bloch(-0.38, 0.92), bloch(-0.92, -0.38), bloch(-0.38, -0.92)},
  };
  return QuantumStrategy(gyni_scenario(), ghz_state(3), std::move(obs));
}

/// GHZ(3) with the no-communication Svetlichny settings; parties 1 and 2
/// ignore the communicated input, so each setting is replicated.
inline QuantumStrategy svetlichny_paper_strategy() {
  using detail::bloch;
  const double r = 1.0 / std::sqrt(2.0);
  // own input -1 / +1
  const Observable2 a_minus = bloch(-r, -r), a_plus = bloch(-r, r);
  const Observable2 b_minus = bloch(-1, 0), b_plus = bloch(0, 1);
  const Observable2 c_minus = bloch(0, 1), c_plus = bloch(1, 0);
  std::vector<std::vector<Observable2>> obs{
      // Alice sees (x1, x2): own input is the most significant position
      {a_minus, a_minus, a_plus, a_plus},
      // Bob sees (x2, x1)
      {b_minus, b_minus, b_plus, b_plus},
      {c_minus, c_plus},
  };
  return QuantumStrategy(svetlichny_scenario(), ghz_state(3), std::move(obs));
}

inline QuantumStrategy experiment_like_strategy() {
  auto ideal = gyni_paper_strategy();
  return ideal.with_state(depolarize(ghz_state(3), kExperimentLikeVisibility));
}

inline QuantumStrategy canonical_strategy(const std::string& name) {
  if (name == "gyni-paper") return gyni_paper_strategy();
  if (name == "svetlichny-paper") return svetlichny_paper_strategy();
  if (name == "experiment-like") return experiment_like_strategy();
  throw ValidationError("unknown strategy '" + name + "' (expected gyni-paper, svetlichny-paper or experiment-like)");
}

// ---------------------------------------------------------------------------
// Random strategies.

template <class Rng>
std::array<double, 3> random_bloch(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    std::array<double, 3> r{g(rng), g(rng), g(rng)};
    const double nrm = std::hypot(r[0], r[1], r[2]);
    if (nrm < 1e-12) continue;
    for (double& c : r) c /= nrm;
    return r;
  }
}

template <class Rng>
PureState random_pure_state(unsigned n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> amps(std::size_t{1} << n);
  for (auto& a : amps) a = Complex{g(rng), g(rng)};
  return PureState::normalized(std::move(amps));
}

template <class Rng>
std::vector<std::vector<Observable2>> random_observables(const CausalScenario& sc, Rng& rng) {
  std::vector<std::vector<Observable2>> obs(sc.parties());
  for (unsigned i = 0; i < sc.parties(); ++i)
    for (std::size_t s = 0; s < sc.setting_count(i); ++s) obs[i].push_back(Observable2(random_bloch(rng)));
  return obs;
}

template <class Rng>
QuantumStrategy random_quantum_strategy(const CausalScenario& sc, Rng& rng) {
  auto state = random_pure_state(sc.parties(), rng);
  auto obs = random_observables(sc, rng);
  return QuantumStrategy(sc, std::move(state), std::move(obs));
}

}  // namespace bellcc
