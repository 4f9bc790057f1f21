#pragma once

// Round-by-round execution of the communication-complexity protocol.
//
// Each round: draw x from the instance distribution and fair y_i; party i
// measures (or looks up) using only the inputs it sees and gets a_i;
// broadcasts m_i = y_i a_i; every party guesses G = m_1 ... m_n; the round
// passes when G equals f(x, y) = y_1 ... y_n S[Q(x)].

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bellcc/classical.hpp"
#include "bellcc/core.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc {

using ProtocolStrategy = std::variant<QuantumStrategy, DeterministicStrategy>;

inline void check_strategy(const CcpInstance& instance, const ProtocolStrategy& strategy) {
  const auto& sc = instance.inequality().scenario();
  if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) {
    if (!(q->scenario == sc)) throw ValidationError("quantum strategy scenario does not match the inequality");
  } else {
    std::get<DeterministicStrategy>(strategy).validate(sc);
  }
}

struct RoundRecord {
  std::vector<int> x;
  std::vector<int> y;
  /// settings[i]: the inputs party i saw, in its visibility order.
  std::vector<std::vector<int>> settings;
  std::vector<int> a;
  std::vector<int> m;
  int guess = 1;
  int f_value = 1;
  bool pass = false;
};

struct SessionLog {
  std::vector<RoundRecord> rounds;
  std::uint64_t round_count = 0;
  std::uint64_t successes = 0;
  double estimate = 0;
  double std_error = 0;
  std::string randomness;
  std::string generator;
  std::uint64_t seed = 0;
};

/// Fewest bits k such that every probability is a multiple of 2^-k; 53 when
/// the distribution is not dyadic.
inline unsigned dyadic_bits(std::span<const double> dist) {
  for (unsigned k = 0; k <= 52; ++k) {
    const double scale = std::ldexp(1.0, static_cast<int>(k));
    bool ok = true;
    for (double p : dist) {
      const double s = p * scale;
      if (std::abs(s - std::round(s)) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return k;
  }
  return 53;
}

/// Bits consumed per round from the input source: x bits then one bit per y_i.
inline unsigned bits_per_round(const CcpInstance& instance) {
  return dyadic_bits(instance.distribution()) + instance.inequality().parties();
}

struct SampledInputs {
  TupleIndex x = 0;
  std::vector<int> y;
};

/// Inverse-CDF draw of x over lexicographic tuple order, then y_1..y_n.
inline SampledInputs sample_inputs(const CcpInstance& instance, RandomnessSource& source) {
  const auto dist = instance.distribution();
  const unsigned k = dyadic_bits(dist);
  const double u = std::ldexp(static_cast<double>(source.bits(k)), -static_cast<int>(k));
  SampledInputs s;
  double cum = 0;
  std::optional<TupleIndex> last_nonzero;
  bool found = false;
  for (TupleIndex i = 0; i < dist.size(); ++i) {
    if (dist[i] == 0) continue;
    last_nonzero = i;
    cum += dist[i];
    if (u < cum) {
      s.x = i;
      found = true;
      break;
    }
  }
  if (!found) s.x = *last_nonzero;
  const unsigned n = instance.inequality().parties();
  s.y.resize(n);
  for (unsigned i = 0; i < n; ++i) s.y[i] = source.fair_sign();
  return s;
}

/// Per-x outcome distributions, computed once per session.
class OutcomeSampler {
 public:
  OutcomeSampler(const CcpInstance& instance, const ProtocolStrategy& strategy) : strategy_(&strategy) {
    check_strategy(instance, strategy);
    if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) {
      for (TupleIndex x = 0; x < q->scenario.tuple_count(); ++x) cdf_.push_back(outcome_distribution(*q, x));
      for (auto& d : cdf_)
        for (std::size_t a = 1; a < d.size(); ++a) d[a] += d[a - 1];
    }
    scenario_ = &instance.inequality().scenario();
  }

  std::vector<int> outcomes(TupleIndex x, Xoshiro256& rng) const {
    const unsigned n = scenario_->parties();
    std::vector<int> a(n);
    if (const auto* d = std::get_if<DeterministicStrategy>(strategy_)) {
      for (unsigned i = 0; i < n; ++i) a[i] = d->output(*scenario_, i, x);
      return a;
    }
    const auto& cdf = cdf_[x];
    const double u = rng.uniform() * cdf.back();
    TupleIndex pick = static_cast<TupleIndex>(cdf.size() - 1);
    for (TupleIndex i = 0; i < cdf.size(); ++i)
      if (u < cdf[i]) {
        pick = i;
        break;
      }
    return tuple_values(n, pick);
  }

 private:
  const ProtocolStrategy* strategy_;
  const CausalScenario* scenario_ = nullptr;
  std::vector<std::vector<double>> cdf_;
};

namespace detail {
inline RoundRecord play_round(const CcpInstance& instance, const OutcomeSampler& sampler, RandomnessSource& source,
                              Xoshiro256& outcome_rng) {
  const auto& ineq = instance.inequality();
  const auto& sc = ineq.scenario();
  const unsigned n = sc.parties();
  const auto in = sample_inputs(instance, source);
  RoundRecord r;
  r.x = tuple_values(n, in.x);
  r.y = in.y;
  for (unsigned i = 0; i < n; ++i) r.settings.push_back(sc.setting_values(i, in.x));
  r.a = sampler.outcomes(in.x, outcome_rng);
  r.guess = 1;
  for (unsigned i = 0; i < n; ++i) {
    r.m.push_back(r.y[i] * r.a[i]);
    r.guess *= r.m[i];
  }
  r.f_value = target_function(ineq, in.x, r.y);
  r.pass = r.guess == r.f_value;
  return r;
}
}  // namespace detail

/// One protocol round. `outcome_rng` drives Born-rule sampling only.
inline RoundRecord run_round(const CcpInstance& instance, const ProtocolStrategy& strategy, RandomnessSource& source,
                             Xoshiro256& outcome_rng) {
  OutcomeSampler sampler(instance, strategy);
  return detail::play_round(instance, sampler, source, outcome_rng);
}

struct SessionOptions {
  bool keep_rounds = true;
  std::uint64_t outcome_seed = 0;
  std::size_t block_rounds = 1024;
  Parallelism parallelism{};
  /// Called once per round, in round order, after all blocks finish.
  std::function<void(const RoundRecord&)> on_round;
};

/// Runs `rounds` independent rounds in fixed-size blocks. Block b draws inputs
/// from source.fork(b, start + b * block_rounds * bits_per_round) and outcomes
/// from a generator derived from (outcome_seed, b), so results do not depend
/// on the thread count.
inline SessionLog run_session(const CcpInstance& instance, const ProtocolStrategy& strategy, std::uint64_t rounds,
                              const RandomnessSource& source, const SessionOptions& opts = {}) {
  if (rounds < 1) throw ValidationError("rounds must be at least 1");
  if (opts.block_rounds < 1) throw ValidationError("block size must be at least 1");
  const OutcomeSampler sampler(instance, strategy);
  const std::uint64_t per_round = bits_per_round(instance);
  if (auto rem = source.remaining(); rem && *rem < rounds * per_round)
    throw RandomnessExhausted("randomness source '" + source.label() + "' holds " + std::to_string(*rem) +
                                  " bits but " + std::to_string(rounds * per_round) + " are needed",
                              static_cast<std::size_t>(*rem / per_round));

  const std::uint64_t blocks = (rounds + opts.block_rounds - 1) / opts.block_rounds;
  std::vector<std::vector<RoundRecord>> block_rounds(blocks);
  std::vector<std::uint64_t> block_successes(blocks, 0);
  const bool keep = opts.keep_rounds || static_cast<bool>(opts.on_round);
  parallel_chunks(static_cast<std::size_t>(blocks), static_cast<std::size_t>(blocks), opts.parallelism,
                  [&](std::size_t b, std::size_t e, std::size_t) {
                    for (std::size_t blk = b; blk < e; ++blk) {
                      const std::uint64_t first = blk * opts.block_rounds;
                      const std::uint64_t last = std::min<std::uint64_t>(rounds, first + opts.block_rounds);
                      RandomnessSource src = source.fork(blk, source.position() + first * per_round);
                      Xoshiro256 rng(derive_seed(opts.outcome_seed, blk, 0x2));
                      for (std::uint64_t r = first; r < last; ++r) {
                        RoundRecord rec = detail::play_round(instance, sampler, src, rng);
                        if (rec.pass) ++block_successes[blk];
                        if (keep) block_rounds[blk].push_back(std::move(rec));
                      }
                    }
                  });

  SessionLog log;
  log.round_count = rounds;
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    log.successes += block_successes[blk];
    for (auto& rec : block_rounds[blk]) {
      if (opts.on_round) opts.on_round(rec);
      if (opts.keep_rounds) log.rounds.push_back(std::move(rec));
    }
  }
  log.estimate = double(log.successes) / double(rounds);
  log.std_error = std::sqrt(log.estimate * (1.0 - log.estimate) / double(rounds));
  log.randomness = source.label();
  log.generator = Xoshiro256::name();
  log.seed = opts.outcome_seed;
  return log;
}

/// sum_x q(x) P(prod_i a_i = S[Q(x)] | x).
inline double exact_success(const CcpInstance& instance, const ProtocolStrategy& strategy) {
  check_strategy(instance, strategy);
  const auto& ineq = instance.inequality();
  const auto& sc = ineq.scenario();
  const unsigned n = sc.parties();
  double total = 0;
  for (TupleIndex x = 0; x < sc.tuple_count(); ++x) {
    const double qx = instance.distribution()[x];
    if (qx == 0) continue;
    const int target = sign_of(ineq.coeff(x));
    double p = 0;
    if (const auto* q = std::get_if<QuantumStrategy>(&strategy)) {
      const auto dist = outcome_distribution(*q, x);
      for (TupleIndex a = 0; a < dist.size(); ++a)
        if (outcome_parity(n, a) == target) p += dist[a];
    } else {
      p = std::get<DeterministicStrategy>(strategy).parity(sc, x) == target ? 1.0 : 0.0;
    }
    total += qx * p;
  }
  return total;
}

}  // namespace bellcc
