#pragma once

// Exact classical (nonlocal hidden variable) bounds.
//
// A hidden-variable model is a convex mixture over lambda of product response
// distributions, and the Bell expression is linear in each response, so its
// maximum is attained at a deterministic strategy: one +-1 response table per
// party over the inputs that party can see. The bound is found by enumerating
// every such strategy.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bellcc/core.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc {

/// Deterministic response a_i(visible inputs) of one party, indexed by the
/// lexicographic setting index of its visible tuple.
struct ResponseFunction {
  unsigned party = 0;
  std::vector<int> table;

  int operator()(std::uint32_t setting) const { return table.at(setting); }

  /// Decodes table index t: bit s of t set means the response on setting s is -1.
  static ResponseFunction from_index(unsigned party, std::size_t settings, std::uint64_t t) {
    ResponseFunction r{party, std::vector<int>(settings)};
    for (std::size_t s = 0; s < settings; ++s) r.table[s] = ((t >> s) & 1u) ? -1 : 1;
    return r;
  }

  static ResponseFunction constant(unsigned party, std::size_t settings, int value) {
    return ResponseFunction{party, std::vector<int>(settings, value)};
  }

  friend bool operator==(const ResponseFunction&, const ResponseFunction&) = default;
};

struct DeterministicStrategy {
  std::vector<ResponseFunction> responses;

  void validate(const CausalScenario& scenario) const {
    if (responses.size() != scenario.parties()) throw ValidationError("strategy must have one response table per party");
    for (unsigned i = 0; i < responses.size(); ++i) {
      if (responses[i].party != i) throw ValidationError("response tables must be ordered by party");
      if (responses[i].table.size() != scenario.setting_count(i))
        throw ValidationError("party " + std::to_string(i + 1) + " response table size does not match its visibility");
      for (int a : responses[i].table)
        if (a != 1 && a != -1) throw ValidationError("responses must be +1 or -1");
    }
  }

  int output(const CausalScenario& scenario, unsigned party, TupleIndex x) const {
    return responses[party](scenario.setting_index(party, x));
  }

  /// Product of all outputs on input x.
  int parity(const CausalScenario& scenario, TupleIndex x) const {
    int p = 1;
    for (unsigned i = 0; i < responses.size(); ++i) p *= output(scenario, i, x);
    return p;
  }

  static DeterministicStrategy constant(const CausalScenario& scenario, int value) {
    DeterministicStrategy s;
    for (unsigned i = 0; i < scenario.parties(); ++i)
      s.responses.push_back(ResponseFunction::constant(i, scenario.setting_count(i), value));
    return s;
  }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;
};

/// sum_x Q(x) prod_i a_i(x restricted to V_i).
inline double strategy_bell_value(const DeterministicStrategy& strategy, const BellInequality& ineq) {
  const auto& sc = ineq.scenario();
  strategy.validate(sc);
  double v = 0;
  for (TupleIndex x = 0; x < sc.tuple_count(); ++x) v += ineq.coeff(x) * strategy.parity(sc, x);
  return v;
}

struct ClassicalBound {
  double value = 0;
  DeterministicStrategy witness;
  std::uint64_t strategies = 0;
};

/// Upper limit on log2 of the number of deterministic strategies enumerated.
inline constexpr unsigned kMaxStrategyBits = 40;

namespace detail {

inline unsigned strategy_bits(const CausalScenario& sc) {
  unsigned bits = 0;
  for (unsigned i = 0; i < sc.parties(); ++i) {
    if (sc.visible_size(i) > 6) return std::numeric_limits<unsigned>::max();
    bits += 1u << sc.visible_size(i);
  }
  return bits;
}

// Bitmask over global input tuples where party i answers -1 under table t.
inline std::uint64_t negative_mask(const CausalScenario& sc, unsigned party, std::uint64_t t) {
  std::uint64_t m = 0;
  for (TupleIndex x = 0; x < sc.tuple_count(); ++x)
    if ((t >> sc.setting_index(party, x)) & 1u) m |= std::uint64_t{1} << x;
  return m;
}

class MaskSource {
 public:
  MaskSource(const CausalScenario& sc, unsigned party) : sc_(&sc), party_(party) {
    count_ = pow2(1u << sc.visible_size(party));
    if (count_ <= (std::uint64_t{1} << 20)) {
      cache_.resize(count_);
      for (std::uint64_t t = 0; t < count_; ++t) cache_[t] = negative_mask(sc, party, t);
    }
  }
  std::uint64_t count() const { return count_; }
  std::uint64_t operator()(std::uint64_t t) const {
    return cache_.empty() ? negative_mask(*sc_, party_, t) : cache_[t];
  }

 private:
  const CausalScenario* sc_;
  unsigned party_;
  std::uint64_t count_;
  std::vector<std::uint64_t> cache_;
};

inline double masked_value(std::span<const double> q, double total, std::uint64_t neg) {
  double s = 0;
  while (neg) {
    s += q[static_cast<std::size_t>(std::countr_zero(neg))];
    neg &= neg - 1;
  }
  return total - 2.0 * s;
}

}  // namespace detail

/// Exact maximum of the Bell expression over all deterministic strategies.
/// Enumeration is an odometer with party 1 as the most significant digit,
/// sharded over party 1's tables; ties resolve to the first maximizer.
inline ClassicalBound classical_bound(const BellInequality& ineq, Parallelism par = {}) {
  const auto& sc = ineq.scenario();
  const unsigned n = sc.parties();
  const unsigned bits = detail::strategy_bits(sc);
  if (bits > kMaxStrategyBits)
    throw SearchSpaceTooLarge("classical enumeration needs 2^" + std::to_string(bits) +
                              " strategies (limit 2^40); reduce party count or visibility");
  std::vector<detail::MaskSource> masks;
  for (unsigned i = 0; i < n; ++i) masks.emplace_back(sc, i);
  double total = 0;
  for (double q : ineq.coeffs()) total += q;

  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> tables;
  };
  const std::uint64_t first_count = masks[0].count();
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(first_count, 256));
  std::vector<Best> shard_best(chunks);

  parallel_chunks(static_cast<std::size_t>(first_count), chunks, par, [&](std::size_t b, std::size_t e, std::size_t c) {
    Best best;
    std::vector<std::uint64_t> digit(n, 0);
    std::vector<std::uint64_t> acc(n + 1, 0);  // acc[i]: xor of masks of parties < i
    for (std::uint64_t t0 = b; t0 < e; ++t0) {
      digit.assign(n, 0);
      digit[0] = t0;
      acc[1] = masks[0](t0);
      for (unsigned i = 1; i < n; ++i) acc[i + 1] = acc[i] ^ masks[i](0);
      while (true) {
        const double v = detail::masked_value(ineq.coeffs(), total, acc[n]);
        if (v > best.value) {
          best.value = v;
          best.tables = digit;
        }
        // advance odometer over parties 1..n-1 (0-based), last party fastest
        unsigned i = n - 1;
        while (i >= 1) {
          if (++digit[i] < masks[i].count()) break;
          digit[i] = 0;
          --i;
        }
        if (i == 0) break;
        for (unsigned j = i; j < n; ++j) acc[j + 1] = acc[j] ^ masks[j](digit[j]);
      }
    }
    shard_best[c] = std::move(best);
  });

  Best best;
  for (auto& s : shard_best)
    if (s.value > best.value) best = std::move(s);

  ClassicalBound out;
  out.value = best.value;
  for (unsigned i = 0; i < n; ++i)
    out.witness.responses.push_back(ResponseFunction::from_index(i, sc.setting_count(i), best.tables[i]));
  out.strategies = std::uint64_t{1} << bits;
  return out;
}

/// 1/2 + B^C / (2 Gamma), using the cached bound when present.
inline double classical_success_bound(const BellInequality& ineq, Parallelism par = {}) {
  const double bc = ineq.cached_classical_bound() ? *ineq.cached_classical_bound() : classical_bound(ineq, par).value;
  return 0.5 + bc / (2.0 * ineq.gamma());
}

// ---------------------------------------------------------------------------
// Exhaustive search over one-bit-broadcast classical CCP protocols.

/// Per party, message m_i(visible x tuple, y_i); entry index is setting * 2 + (y_i == +1).
struct MessageStrategy {
  std::vector<std::vector<int>> tables;

  int message(unsigned party, std::uint32_t setting, int y) const {
    return tables.at(party).at(setting * 2 + (y == 1 ? 1 : 0));
  }
};

enum class MessageFamily {
  /// Every function of (visible inputs, y_i).
  full,
  /// m_i = y_i * h_i(visible inputs).
  product_form,
};

inline const char* to_string(MessageFamily f) { return f == MessageFamily::full ? "full" : "product"; }

struct CcpSearchResult {
  double best = 0;
  unsigned best_party = 0;
  std::vector<double> per_party;
  MessageStrategy witness;
  std::uint64_t strategies = 0;
};

inline constexpr std::uint64_t kDefaultCcpGuard = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kLongRunningCcpGuard = std::uint64_t{1} << 26;

namespace detail {

inline std::vector<int> message_table(MessageFamily family, std::size_t settings, std::uint64_t t) {
  std::vector<int> m(settings * 2);
  for (std::size_t s = 0; s < settings; ++s) {
    if (family == MessageFamily::full) {
      m[2 * s] = ((t >> (2 * s)) & 1u) ? -1 : 1;
      m[2 * s + 1] = ((t >> (2 * s + 1)) & 1u) ? -1 : 1;
    } else {
      const int h = ((t >> s) & 1u) ? -1 : 1;
      m[2 * s] = -h;  // y = -1
      m[2 * s + 1] = h;
    }
  }
  return m;
}

}  // namespace detail

/// Best success probability any single party can reach when every party
/// broadcasts one deterministic bit and guesses pointwise-optimally given its
/// own visible inputs, its y_i and the other parties' messages. x follows the
/// instance distribution and each y_i is a fair independent bit.
inline CcpSearchResult ccp_exhaustive_bound(const CcpInstance& instance, MessageFamily family,
                                            std::uint64_t guard = kDefaultCcpGuard, Parallelism par = {}) {
  const auto& ineq = instance.inequality();
  const auto& sc = ineq.scenario();
  const unsigned n = sc.parties();

  std::vector<std::uint64_t> counts(n);
  std::uint64_t total = 1;
  for (unsigned i = 0; i < n; ++i) {
    const std::size_t entries = sc.setting_count(i) * (family == MessageFamily::full ? 2 : 1);
    if (entries > 32) throw SearchSpaceTooLarge("message table for party " + std::to_string(i + 1) + " is too large");
    counts[i] = std::uint64_t{1} << entries;
    if (total > guard / counts[i])
      throw SearchSpaceTooLarge("CCP search space exceeds the guard of " + std::to_string(guard) +
                                " message strategies; use product-form messages or raise the guard");
    total *= counts[i];
  }

  // Message bits per party per table, indexed [party][table][setting*2 + ybit].
  std::vector<std::vector<std::vector<int>>> tables(n);
  for (unsigned i = 0; i < n; ++i)
    for (std::uint64_t t = 0; t < counts[i]; ++t) tables[i].push_back(detail::message_table(family, sc.setting_count(i), t));

  // Enumerated (x, y) points with weight q(x)/2^n and signed target value.
  struct Point {
    double weighted_target;
    std::vector<std::uint32_t> entry;  // per party: setting*2 + ybit
    std::vector<std::uint32_t> info;   // per party: setting*2 + ybit, shifted for message bits
  };
  std::vector<Point> points;
  const std::size_t ycount = std::size_t{1} << n;
  for (TupleIndex x = 0; x < sc.tuple_count(); ++x) {
    const double qx = instance.distribution()[x];
    if (qx == 0) continue;
    for (std::size_t yi = 0; yi < ycount; ++yi) {
      const auto y = tuple_values(n, static_cast<TupleIndex>(yi));
      Point p;
      p.weighted_target = qx / double(ycount) * target_function(ineq, x, y);
      for (unsigned i = 0; i < n; ++i) {
        const std::uint32_t e = sc.setting_index(i, x) * 2 + (y[i] == 1 ? 1u : 0u);
        p.entry.push_back(e);
        p.info.push_back(e << (n - 1));
      }
      points.push_back(std::move(p));
    }
  }
  std::vector<std::size_t> info_size(n);
  for (unsigned i = 0; i < n; ++i) info_size[i] = sc.setting_count(i) * 2 * (std::size_t{1} << (n - 1));

  struct Best {
    double value = -1;
    unsigned party = 0;
    std::vector<std::uint64_t> digits;
    std::vector<double> per_party;
  };
  const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(counts[0], 256));
  std::vector<Best> shard_best(chunks);

  parallel_chunks(static_cast<std::size_t>(counts[0]), chunks, par, [&](std::size_t b, std::size_t e, std::size_t c) {
    Best best;
    best.per_party.assign(n, -1);
    std::vector<std::vector<double>> score(n);
    for (unsigned i = 0; i < n; ++i) score[i].resize(info_size[i]);
    std::vector<std::uint64_t> digit(n, 0);
    std::vector<int> msg(n);
    for (std::uint64_t t0 = b; t0 < e; ++t0) {
      digit.assign(n, 0);
      digit[0] = t0;
      while (true) {
        for (auto& s : score) std::fill(s.begin(), s.end(), 0.0);
        for (const auto& p : points) {
          for (unsigned i = 0; i < n; ++i) msg[i] = tables[i][digit[i]][p.entry[i]];
          for (unsigned i = 0; i < n; ++i) {
            std::uint32_t others = 0;
            for (unsigned j = 0; j < n; ++j)
              if (j != i) others = (others << 1) | (msg[j] == 1 ? 1u : 0u);
            score[i][p.info[i] | others] += p.weighted_target;
          }
        }
        for (unsigned i = 0; i < n; ++i) {
          double s = 0;
          for (double v : score[i]) s += std::abs(v);
          const double success = 0.5 + 0.5 * s;
          best.per_party[i] = std::max(best.per_party[i], success);
          if (success > best.value) {
            best.value = success;
            best.party = i;
            best.digits = digit;
          }
        }
        unsigned i = n - 1;
        while (i >= 1) {
          if (++digit[i] < counts[i]) break;
          digit[i] = 0;
          --i;
        }
        if (i == 0) break;
      }
    }
    shard_best[c] = std::move(best);
  });

  Best best;
  best.per_party.assign(n, -1);
  for (auto& s : shard_best) {
    for (unsigned i = 0; i < n; ++i) best.per_party[i] = std::max(best.per_party[i], s.per_party[i]);
    if (s.value > best.value) {
      best.value = s.value;
      best.party = s.party;
      best.digits = s.digits;
    }
  }

  CcpSearchResult out;
  out.best = best.value;
  out.best_party = best.party;
  out.per_party = best.per_party;
  out.strategies = total;
  for (unsigned i = 0; i < n; ++i) out.witness.tables.push_back(tables[i][best.digits[i]]);
  return out;
}

}  // namespace bellcc
