#pragma once

// JSON configuration files, correlator CSV export and session-log encoding.
//
// Inequality:  {"name": "gyni"}  or
//              {"scenario": {"n": 3, "visibility": [[1,3],[2,1],[3,2]]},
//               "coeffs": [{"x": [1,1,1], "q": 1}, ...]}   (omitted tuples mean Q = 0)
// Strategy:    {"name": "gyni-paper"}  or
//              {"state": "ghz" | {"amplitudes": [[re,im], ...]},
//               "observables": [{"party": 1, "setting": [1,-1], "bloch": [x,y,z]}, ...],
//               "visibility_v": 1.0}

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellcc/classical.hpp"
#include "bellcc/core.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/protocol.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc {

using json = nlohmann::ordered_json;

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string(context) + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(context) + ": field '" + key + "' has the wrong type");
  }
}

inline std::vector<int> pm_vector(const json& j, const char* context) {
  if (!j.is_array()) throw ValidationError(std::string(context) + ": expected an array of +1/-1");
  std::vector<int> v;
  for (const auto& e : j) {
    if (!e.is_number_integer() || (e.get<int>() != 1 && e.get<int>() != -1))
      throw ValidationError(std::string(context) + ": entries must be +1 or -1");
    v.push_back(e.get<int>());
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scenario

inline json scenario_to_json(const CausalScenario& sc) {
  json vis = json::array();
  for (const auto& v : sc.visibility()) {
    json row = json::array();
    for (unsigned i : v) row.push_back(i + 1);
    vis.push_back(row);
  }
  return json{{"n", sc.parties()}, {"visibility", vis}};
}

inline CausalScenario scenario_from_json(const json& j) {
  const auto n = detail::get_field<int>(j, "n", "scenario");
  if (n < 0) throw ValidationError("scenario: n must be positive");
  const auto vis = detail::get_field<std::vector<std::vector<int>>>(j, "visibility", "scenario");
  std::vector<std::vector<unsigned>> v;
  for (const auto& row : vis) {
    std::vector<unsigned> r;
    for (int i : row) {
      if (i < 1) throw ValidationError("scenario: visibility indices are 1-based");
      r.push_back(static_cast<unsigned>(i));
    }
    v.push_back(std::move(r));
  }
  return make_scenario(static_cast<unsigned>(n), v);
}

// ---------------------------------------------------------------------------
// Inequality

inline bool is_named_inequality(const std::string& name) {
  return name == "gyni" || name == "svetlichny" || name == "chsh";
}

inline json inequality_to_json(const BellInequality& ineq) {
  if (is_named_inequality(ineq.name()) && ineq == named_inequality(ineq.name())) return json{{"name", ineq.name()}};
  json coeffs = json::array();
  const unsigned n = ineq.parties();
  for (TupleIndex x = 0; x < ineq.coeffs().size(); ++x) {
    const double q = ineq.coeff(x);
    if (q == 0) continue;
    json entry{{"x", tuple_values(n, x)}};
    if (q == std::round(q) && std::abs(q) < 9e15)
      entry["q"] = static_cast<std::int64_t>(q);
    else
      entry["q"] = q;
    coeffs.push_back(entry);
  }
  return json{{"scenario", scenario_to_json(ineq.scenario())}, {"coeffs", coeffs}};
}

inline BellInequality inequality_from_json(const json& j) {
  if (j.is_string()) return named_inequality(j.get<std::string>());
  if (!j.is_object()) throw ValidationError("inequality: expected an object or a name");
  if (j.contains("name") && !j.contains("coeffs")) return named_inequality(detail::get_field<std::string>(j, "name", "inequality"));
  const auto sc = scenario_from_json(detail::get_field<json>(j, "scenario", "inequality"));
  const auto coeffs = detail::get_field<json>(j, "coeffs", "inequality");
  if (!coeffs.is_array()) throw ValidationError("inequality: 'coeffs' must be an array");
  std::vector<double> q(sc.tuple_count(), 0.0);
  std::vector<bool> seen(sc.tuple_count(), false);
  for (const auto& c : coeffs) {
    const auto x = detail::pm_vector(detail::get_field<json>(c, "x", "inequality coefficient"), "inequality coefficient x");
    if (x.size() != sc.parties()) throw ValidationError("inequality coefficient: x has the wrong length");
    const auto idx = tuple_index(x);
    if (seen[idx]) throw ValidationError("inequality coefficient: duplicate tuple");
    seen[idx] = true;
    q[idx] = detail::get_field<double>(c, "q", "inequality coefficient");
  }
  return BellInequality(sc, std::move(q), j.value("name", std::string("custom")));
}

// ---------------------------------------------------------------------------
// Strategy

inline json state_to_json(const PureState& psi) {
  if (psi.qubits() >= 2) {
    try {
      const auto ghz = ghz_state(psi.qubits());
      bool same = true;
      for (std::size_t i = 0; i < psi.dim() && same; ++i) same = psi.amplitudes()[i] == ghz.amplitudes()[i];
      if (same) return "ghz";
    } catch (const ValidationError&) {
    }
  }
  json amps = json::array();
  for (const auto& a : psi.amplitudes()) amps.push_back(json::array({a.real(), a.imag()}));
  return json{{"amplitudes", amps}};
}

/// A strategy file: pure state, observables and optional white-noise visibility.
struct StrategyFile {
  PureState state;
  std::vector<std::vector<Observable2>> observables;
  double visibility = 1.0;

  QuantumStrategy resolve(const CausalScenario& sc) const {
    if (visibility == 1.0) return QuantumStrategy(sc, state, observables);
    return QuantumStrategy(sc, depolarize(state, visibility), observables);
  }
};

inline json strategy_to_json(const CausalScenario& sc, const PureState& state,
                             const std::vector<std::vector<Observable2>>& observables, double visibility = 1.0) {
  json obs = json::array();
  for (unsigned i = 0; i < observables.size(); ++i)
    for (std::uint32_t k = 0; k < observables[i].size(); ++k) {
      const auto& b = observables[i][k].bloch();
      obs.push_back(json{{"party", i + 1},
                         {"setting", tuple_values(sc.visible_size(i), k)},
                         {"bloch", json::array({b[0], b[1], b[2]})}});
    }
  return json{{"state", state_to_json(state)}, {"observables", obs}, {"visibility_v", visibility}};
}

inline StrategyFile strategy_file_from_json(const json& j, const CausalScenario& sc) {
  const unsigned n = sc.parties();
  const json state_j = detail::get_field<json>(j, "state", "strategy");
  std::optional<PureState> state;
  if (state_j.is_string()) {
    if (state_j.get<std::string>() != "ghz") throw ValidationError("strategy: unknown state name '" + state_j.get<std::string>() + "'");
    state = ghz_state(n);
  } else {
    const auto amps = detail::get_field<std::vector<std::vector<double>>>(state_j, "amplitudes", "strategy state");
    std::vector<Complex> v;
    for (const auto& a : amps) {
      if (a.size() != 2) throw ValidationError("strategy state: amplitudes are [re, im] pairs");
      v.emplace_back(a[0], a[1]);
    }
    const double nrm = std::sqrt(squared_norm(v));
    if (std::abs(nrm - 1.0) > 1e-6) throw ValidationError("strategy state: amplitudes are not normalized");
    state = PureState::normalized(std::move(v));
  }
  if (state->qubits() != n) throw ValidationError("strategy state has the wrong number of qubits");

  std::vector<std::vector<std::optional<Observable2>>> slots(n);
  for (unsigned i = 0; i < n; ++i) slots[i].resize(sc.setting_count(i));
  for (const auto& o : detail::get_field<json>(j, "observables", "strategy")) {
    const int party = detail::get_field<int>(o, "party", "strategy observable");
    if (party < 1 || party > static_cast<int>(n)) throw ValidationError("strategy observable: party out of range");
    const unsigned p = static_cast<unsigned>(party - 1);
    const auto setting = detail::pm_vector(detail::get_field<json>(o, "setting", "strategy observable"), "strategy observable setting");
    if (setting.size() != sc.visible_size(p))
      throw ValidationError("strategy observable: party " + std::to_string(party) + " setting must have " +
                            std::to_string(sc.visible_size(p)) + " entries");
    const auto b = detail::get_field<std::vector<double>>(o, "bloch", "strategy observable");
    if (b.size() != 3) throw ValidationError("strategy observable: bloch must have three components");
    auto& slot = slots[p][tuple_index(setting)];
    if (slot) throw ValidationError("strategy observable: duplicate setting for party " + std::to_string(party));
    slot = bloch_to_observable({b[0], b[1], b[2]});
  }
  StrategyFile f{*state, {}, j.value("visibility_v", 1.0)};
  if (!(f.visibility >= 0.0 && f.visibility <= 1.0)) throw ValidationError("strategy: visibility_v must lie in [0, 1]");
  for (unsigned i = 0; i < n; ++i) {
    f.observables.emplace_back();
    for (std::size_t k = 0; k < slots[i].size(); ++k) {
      if (!slots[i][k])
        throw ValidationError("strategy: party " + std::to_string(i + 1) + " has no observable for setting " +
                              std::to_string(k));
      f.observables[i].push_back(*slots[i][k]);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Correlator CSV

inline std::string correlators_to_csv(const CorrelatorTable& table, unsigned n) {
  std::ostringstream os;
  for (unsigned i = 1; i <= n; ++i) os << "x_" << i << ',';
  os << "E\n";
  os << std::setprecision(12);
  for (TupleIndex x = 0; x < table.values.size(); ++x) {
    for (int v : tuple_values(n, x)) os << v << ',';
    const double e = table.values[x] == 0.0 ? 0.0 : table.values[x];  // no "-0"
    os << e << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Session logs (JSON lines)

inline json round_to_json(const RoundRecord& r) {
  return json{{"x", r.x}, {"y", r.y}, {"settings", r.settings}, {"a", r.a}, {"m", r.m},
              {"guess", r.guess}, {"f_value", r.f_value}, {"pass", r.pass}};
}

inline RoundRecord round_from_json(const json& j) {
  RoundRecord r;
  r.x = detail::get_field<std::vector<int>>(j, "x", "round");
  r.y = detail::get_field<std::vector<int>>(j, "y", "round");
  r.settings = detail::get_field<std::vector<std::vector<int>>>(j, "settings", "round");
  r.a = detail::get_field<std::vector<int>>(j, "a", "round");
  r.m = detail::get_field<std::vector<int>>(j, "m", "round");
  r.guess = detail::get_field<int>(j, "guess", "round");
  r.f_value = detail::get_field<int>(j, "f_value", "round");
  r.pass = detail::get_field<bool>(j, "pass", "round");
  return r;
}

inline json session_summary(const SessionLog& log) {
  return json{{"rounds", log.round_count}, {"successes", log.successes}, {"estimate", log.estimate},
              {"std_error", log.std_error}};
}

/// 64-bit FNV-1a of a string, printed as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace bellcc
