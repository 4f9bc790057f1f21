#pragma once

// Causal structures, full-correlator Bell inequalities and the associated
// communication-complexity target function.
//
// Input tuples x in {-1,+1}^n are addressed by their lexicographic index:
// x_1 is the most significant position and -1 sorts before +1, so index bit
// (n - 1 - i) is set exactly when x_{i+1} = +1.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellcc/core.hpp"

namespace bellcc {

inline constexpr unsigned kMaxParties = 6;

using TupleIndex = std::uint32_t;

inline std::vector<int> tuple_values(unsigned n, TupleIndex idx) {
  std::vector<int> x(n);
  for (unsigned i = 0; i < n; ++i) x[i] = ((idx >> (n - 1 - i)) & 1u) ? 1 : -1;
  return x;
}

inline TupleIndex tuple_index(std::span<const int> x) {
  TupleIndex idx = 0;
  for (int v : x) {
    if (v != 1 && v != -1) throw ValidationError("tuple entries must be +1 or -1");
    idx = (idx << 1) | (v == 1 ? 1u : 0u);
  }
  return idx;
}

inline int sign_of(double q) { return q < 0 ? -1 : 1; }

/// Which inputs each party's output may depend on. Party indices are
/// 0-based internally; each visibility list starts with the party itself.
class CausalScenario {
 public:
  CausalScenario() = default;

  unsigned parties() const noexcept { return n_; }
  std::size_t tuple_count() const noexcept { return std::size_t{1} << n_; }
  const std::vector<std::vector<unsigned>>& visibility() const noexcept { return vis_; }
  const std::vector<unsigned>& visibility(unsigned party) const { return vis_.at(party); }
  unsigned visible_size(unsigned party) const { return static_cast<unsigned>(vis_.at(party).size()); }
  std::size_t setting_count(unsigned party) const { return std::size_t{1} << vis_.at(party).size(); }

  /// Lexicographic index of the inputs party `party` sees when the global input is x.
  std::uint32_t setting_index(unsigned party, TupleIndex x) const { return settings_[party][x]; }

  std::vector<int> setting_values(unsigned party, TupleIndex x) const {
    return tuple_values(visible_size(party), setting_index(party, x));
  }

  friend bool operator==(const CausalScenario& a, const CausalScenario& b) {
    return a.n_ == b.n_ && a.vis_ == b.vis_;
  }

  friend CausalScenario make_scenario(unsigned n, const std::vector<std::vector<unsigned>>& visibility);

 private:
  unsigned n_ = 0;
  std::vector<std::vector<unsigned>> vis_;
  std::vector<std::vector<std::uint32_t>> settings_;
};

/// Builds a scenario from 1-based visibility lists V_i (first element must be i).
inline CausalScenario make_scenario(unsigned n, const std::vector<std::vector<unsigned>>& visibility) {
  if (n < 2 || n > kMaxParties)
    throw ValidationError("party count must satisfy 2 <= n <= " + std::to_string(kMaxParties));
  if (visibility.size() != n)
    throw ValidationError("expected " + std::to_string(n) + " visibility lists, got " + std::to_string(visibility.size()));
  CausalScenario s;
  s.n_ = n;
  for (unsigned i = 0; i < n; ++i) {
    const auto& v = visibility[i];
    const std::string who = "party " + std::to_string(i + 1);
    if (v.empty() || v.front() != i + 1)
      throw ValidationError(who + ": visibility list must start with its own index " + std::to_string(i + 1));
    std::vector<unsigned> zero_based;
    std::vector<bool> seen(n, false);
    for (unsigned idx : v) {
      if (idx < 1 || idx > n)
        throw ValidationError(who + ": input index " + std::to_string(idx) + " out of range 1.." + std::to_string(n));
      if (seen[idx - 1]) throw ValidationError(who + ": duplicate input index " + std::to_string(idx));
      seen[idx - 1] = true;
      zero_based.push_back(idx - 1);
    }
    s.vis_.push_back(std::move(zero_based));
  }
  s.settings_.assign(n, std::vector<std::uint32_t>(std::size_t{1} << n));
  for (unsigned i = 0; i < n; ++i)
    for (TupleIndex x = 0; x < (TupleIndex{1} << n); ++x) {
      std::uint32_t k = 0;
      for (unsigned src : s.vis_[i]) k = (k << 1) | ((x >> (n - 1 - src)) & 1u);
      s.settings_[i][x] = k;
    }
  return s;
}

/// Three-party cyclic structure: party i also sees the input of its left neighbour.
inline CausalScenario gyni_scenario() { return make_scenario(3, {{1, 3}, {2, 1}, {3, 2}}); }

/// Parties 1 and 2 exchange inputs; party 3 sees only its own.
inline CausalScenario svetlichny_scenario() { return make_scenario(3, {{1, 2}, {2, 1}, {3}}); }

/// No communication.
inline CausalScenario standard_scenario(unsigned n) {
  std::vector<std::vector<unsigned>> v;
  for (unsigned i = 1; i <= n; ++i) v.push_back({i});
  return make_scenario(n, v);
}

/// Every party sees every input (own index first).
inline CausalScenario full_visibility_scenario(unsigned n) {
  std::vector<std::vector<unsigned>> v;
  for (unsigned i = 1; i <= n; ++i) {
    std::vector<unsigned> vi{i};
    for (unsigned j = 1; j <= n; ++j)
      if (j != i) vi.push_back(j);
    v.push_back(std::move(vi));
  }
  return make_scenario(n, v);
}

/// Full-correlator Bell inequality sum_x Q(x) E_x <= B^C over a causal scenario.
class BellInequality {
 public:
  BellInequality(CausalScenario scenario, std::vector<double> coeffs, std::string name = "custom")
      : scenario_(std::move(scenario)), coeffs_(std::move(coeffs)), name_(std::move(name)) {
    if (coeffs_.size() != scenario_.tuple_count())
      throw ValidationError("coefficient table has " + std::to_string(coeffs_.size()) + " entries, expected " +
                            std::to_string(scenario_.tuple_count()));
    gamma_ = 0;
    for (double q : coeffs_) {
      if (!std::isfinite(q)) throw ValidationError("coefficient is not finite");
      gamma_ += std::abs(q);
    }
    if (!(gamma_ > 0)) throw ValidationError("all inequality coefficients are zero");
  }

  const CausalScenario& scenario() const noexcept { return scenario_; }
  unsigned parties() const noexcept { return scenario_.parties(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(TupleIndex x) const { return coeffs_.at(x); }
  double gamma() const noexcept { return gamma_; }
  const std::string& name() const noexcept { return name_; }

  std::optional<double> cached_classical_bound() const noexcept { return classical_bound_; }

  BellInequality with_classical_bound(double bound) const {
    BellInequality copy = *this;
    copy.classical_bound_ = bound;
    return copy;
  }

  friend bool operator==(const BellInequality& a, const BellInequality& b) {
    return a.scenario_ == b.scenario_ && a.coeffs_ == b.coeffs_;
  }

 private:
  CausalScenario scenario_;
  std::vector<double> coeffs_;
  std::string name_;
  double gamma_ = 0;
  std::optional<double> classical_bound_;
};

/// Q_G(x) = 1 - (1-x1)(1-x2)(1-x3)/4 on the cyclic structure; B^C = 6.
inline BellInequality gyni_inequality() {
  std::vector<double> q(8);
  for (TupleIndex i = 0; i < 8; ++i) {
    const auto x = tuple_values(3, i);
    q[i] = 1.0 - (1 - x[0]) * (1 - x[1]) * (1 - x[2]) / 4.0;
  }
  return BellInequality(gyni_scenario(), std::move(q), "gyni");
}

/// Q_S(x) = 1 - (1-x1)(1-x2)(1-x3)/4 - (1+x1)(1+x2)(1+x3)/4; B^C = 4.
inline BellInequality svetlichny_inequality() {
  std::vector<double> q(8);
  for (TupleIndex i = 0; i < 8; ++i) {
    const auto x = tuple_values(3, i);
    q[i] = 1.0 - (1 - x[0]) * (1 - x[1]) * (1 - x[2]) / 4.0 - (1 + x[0]) * (1 + x[1]) * (1 + x[2]) / 4.0;
  }
  return BellInequality(svetlichny_scenario(), std::move(q), "svetlichny");
}

/// CHSH in lexicographic order: Q = (1, 1, 1, -1); B^C = 2.
inline BellInequality chsh_inequality() {
  return BellInequality(standard_scenario(2), {1.0, 1.0, 1.0, -1.0}, "chsh");
}

inline BellInequality named_inequality(const std::string& name) {
  if (name == "gyni") return gyni_inequality();
  if (name == "svetlichny") return svetlichny_inequality();
  if (name == "chsh") return chsh_inequality();
  throw ValidationError("unknown inequality '" + name + "' (expected gyni, svetlichny or chsh)");
}

/// q*(x) = |Q(x)| / Gamma.
inline std::vector<double> input_distribution(const BellInequality& ineq) {
  std::vector<double> q(ineq.coeffs().size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::abs(ineq.coeffs()[i]) / ineq.gamma();
  return q;
}

/// f(x, y) = y_1 ... y_n S[Q(x)], with S[0] taken as +1.
inline int target_function(const BellInequality& ineq, TupleIndex x, std::span<const int> y) {
  if (y.size() != ineq.parties()) throw ValidationError("y has the wrong length");
  int prod = sign_of(ineq.coeff(x));
  for (int v : y) {
    if (v != 1 && v != -1) throw ValidationError("y entries must be +1 or -1");
    prod *= v;
  }
  return prod;
}

/// An inequality together with the distribution its CCP draws x from.
class CcpInstance {
 public:
  explicit CcpInstance(BellInequality ineq) : ineq_(std::move(ineq)), dist_(input_distribution(ineq_)) {}

  CcpInstance(BellInequality ineq, std::vector<double> distribution)
      : ineq_(std::move(ineq)), dist_(std::move(distribution)) {
    if (dist_.size() != ineq_.scenario().tuple_count()) throw ValidationError("distribution has the wrong length");
    double total = 0;
    for (double p : dist_) {
      if (!(p >= 0) || !std::isfinite(p)) throw ValidationError("distribution entries must be nonnegative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("distribution does not sum to 1");
  }

  const BellInequality& inequality() const noexcept { return ineq_; }
  std::span<const double> distribution() const noexcept { return dist_; }

 private:
  BellInequality ineq_;
  std::vector<double> dist_;
};

}  // namespace bellcc
