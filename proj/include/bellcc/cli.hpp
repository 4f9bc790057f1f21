#pragma once

// Command-line driver. Every run is described by a RunConfig, which can be
// dumped as JSON (--dump-config) and loaded back (--config) unchanged.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellcc/beacon.hpp"
#include "bellcc/beacon_fetch.hpp"
#include "bellcc/classical.hpp"
#include "bellcc/io.hpp"
#include "bellcc/optimizer.hpp"
#include "bellcc/protocol.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/scenario.hpp"

namespace bellcc::cli {

inline const std::vector<std::string> kCommands{"bound", "optimize", "eval", "simulate", "verify", "report"};
inline const std::vector<std::string> kStrategyPresets{"gyni-paper", "svetlichny-paper", "experiment-like",
                                                       "classical-witness"};

struct RunConfig {
  std::string command;
  /// {"name": ...} or a full inequality object.
  std::optional<json> inequality;
  /// {"name": preset} or a strategy object.
  std::optional<json> strategy;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> seed;
  unsigned restarts = 32;
  double tol = 1e-12;
  unsigned threads = 0;
  std::optional<double> noise_v;
  std::string randomness = "prng";
  std::uint64_t beacon_first = 1;
  std::string beacon_cache = "beacon-cache.hex";
  std::string format = "json";
  std::string out;
  std::string log;
  std::string ccp = "none";
  bool allow_long = false;
  bool optimize_state = false;
  unsigned count = 100;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {
template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config: field '") + key + "' has the wrong type");
  }
}
template <class T>
T value_from(const json& j, const char* key, T fallback) {
  return opt_from<T>(j, key).value_or(fallback);
}
}  // namespace detail

inline json config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"inequality", detail::opt_json(c.inequality)},
              {"strategy", detail::opt_json(c.strategy)},
              {"rounds", detail::opt_json(c.rounds)},
              {"seed", detail::opt_json(c.seed)},
              {"restarts", c.restarts},
              {"tol", c.tol},
              {"threads", c.threads},
              {"noise_v", detail::opt_json(c.noise_v)},
              {"randomness", c.randomness},
              {"beacon_first", c.beacon_first},
              {"beacon_cache", c.beacon_cache},
              {"format", c.format},
              {"out", c.out},
              {"log", c.log},
              {"ccp", c.ccp},
              {"allow_long", c.allow_long},
              {"optimize_state", c.optimize_state},
              {"count", c.count}};
}

inline RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  static const std::vector<std::string> known{"command", "inequality", "strategy",     "rounds",       "seed",
                                              "restarts", "tol",       "threads",      "noise_v",      "randomness",
                                              "beacon_first", "beacon_cache", "format", "out",          "log",
                                              "ccp",     "allow_long", "optimize_state", "count"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ValidationError("config: unknown field '" + k + "'");
  RunConfig c;
  c.command = detail::value_from<std::string>(j, "command", "");
  c.inequality = detail::opt_from<json>(j, "inequality");
  c.strategy = detail::opt_from<json>(j, "strategy");
  c.rounds = detail::opt_from<std::uint64_t>(j, "rounds");
  c.seed = detail::opt_from<std::uint64_t>(j, "seed");
  c.restarts = detail::value_from<unsigned>(j, "restarts", c.restarts);
  c.tol = detail::value_from<double>(j, "tol", c.tol);
  c.threads = detail::value_from<unsigned>(j, "threads", c.threads);
  c.noise_v = detail::opt_from<double>(j, "noise_v");
  c.randomness = detail::value_from<std::string>(j, "randomness", c.randomness);
  c.beacon_first = detail::value_from<std::uint64_t>(j, "beacon_first", c.beacon_first);
  c.beacon_cache = detail::value_from<std::string>(j, "beacon_cache", c.beacon_cache);
  c.format = detail::value_from<std::string>(j, "format", c.format);
  c.out = detail::value_from<std::string>(j, "out", c.out);
  c.log = detail::value_from<std::string>(j, "log", c.log);
  c.ccp = detail::value_from<std::string>(j, "ccp", c.ccp);
  c.allow_long = detail::value_from<bool>(j, "allow_long", c.allow_long);
  c.optimize_state = detail::value_from<bool>(j, "optimize_state", c.optimize_state);
  c.count = detail::value_from<unsigned>(j, "count", c.count);
  return c;
}

inline json load_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// A name or a path to a JSON file.
inline json inequality_source(const std::string& arg) {
  if (is_named_inequality(arg)) return json{{"name", arg}};
  if (!std::filesystem::exists(arg))
    throw ValidationError("--ineq '" + arg + "' is neither gyni, svetlichny, chsh nor an existing file");
  return load_json_file(arg);
}

inline json strategy_source(const std::string& arg) {
  if (std::find(kStrategyPresets.begin(), kStrategyPresets.end(), arg) != kStrategyPresets.end())
    return json{{"name", arg}};
  if (!std::filesystem::exists(arg))
    throw ValidationError("--strategy '" + arg + "' is neither a preset nor an existing file");
  return load_json_file(arg);
}

inline void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw ValidationError("unknown command '" + c.command + "'");
  if (c.inequality && c.inequality->is_object() && c.inequality->contains("name") &&
      (c.inequality->contains("coeffs") || c.inequality->contains("scenario")))
    throw ValidationError("inequality must be given either by name or by coefficients, not both");
  if (c.strategy && c.strategy->is_object() && c.strategy->contains("name") && c.strategy->contains("observables"))
    throw ValidationError("strategy must be given either by name or by observables, not both");
  const bool needs_ineq = c.command != "report" && c.command != "verify";
  if (needs_ineq && !c.inequality) throw ValidationError(c.command + " requires --ineq");
  if ((c.command == "eval" || c.command == "simulate") && !c.strategy)
    throw ValidationError(c.command + " requires --strategy");
  const bool randomized = c.command == "optimize" || c.command == "simulate" || c.command == "verify";
  if (randomized && !c.seed) throw ValidationError(c.command + " is randomized and requires an explicit --seed");
  if (c.command == "simulate") {
    if (!c.rounds) throw ValidationError("simulate requires --rounds");
    if (*c.rounds < 1) throw ValidationError("--rounds must be at least 1");
  }
  if (c.noise_v && !(*c.noise_v >= 0.0 && *c.noise_v <= 1.0)) throw ValidationError("--noise-v must lie in [0, 1]");
  if (c.restarts < 1) throw ValidationError("--restarts must be at least 1");
  if (!(c.tol > 0)) throw ValidationError("--tol must be positive");
  if (c.count < 1) throw ValidationError("--count must be at least 1");
  if (c.format != "json" && c.format != "csv") throw ValidationError("--format must be json or csv");
  if (c.ccp != "none" && c.ccp != "product" && c.ccp != "full") throw ValidationError("--ccp must be none, product or full");
  if (c.randomness != "prng" && c.randomness.rfind("file:", 0) != 0 && c.randomness.rfind("beacon:", 0) != 0)
    throw ValidationError("--randomness must be prng, file:PATH or beacon:PATH|URL");
}

// ---------------------------------------------------------------------------

namespace detail {

/// Integral doubles print without a fractional part.
inline json number(double v) {
  if (std::isfinite(v) && v == std::round(v) && std::abs(v) < 9e15) return static_cast<std::int64_t>(v);
  return v;
}

inline json witness_json(const DeterministicStrategy& s) {
  json t = json::array();
  for (const auto& r : s.responses) t.push_back(r.table);
  return t;
}

struct ResolvedStrategy {
  ProtocolStrategy strategy;
  std::string label;
  std::optional<double> visibility;
};

inline ResolvedStrategy resolve_strategy(const RunConfig& c, const BellInequality& ineq) {
  const json& j = *c.strategy;
  const auto& sc = ineq.scenario();
  if (j.is_object() && j.contains("name")) {
    const std::string name = bellcc::detail::get_field<std::string>(j, "name", "strategy");
    if (name == "classical-witness") {
      if (c.noise_v) throw ValidationError("--noise-v does not apply to a deterministic strategy");
      return {classical_bound(ineq, Parallelism{c.threads}).witness, name, std::nullopt};
    }
    if (name == "experiment-like" && c.noise_v)
      throw ValidationError("experiment-like already fixes the visibility; use gyni-paper with --noise-v");
    auto q = canonical_strategy(name);
    if (!(q.scenario == sc)) throw ValidationError("strategy '" + name + "' does not belong to this inequality's scenario");
    std::optional<double> v;
    if (name == "experiment-like") v = kExperimentLikeVisibility;
    if (c.noise_v) {
      q = q.with_state(depolarize(std::get<PureState>(q.state), *c.noise_v));
      v = c.noise_v;
    }
    return {std::move(q), name, v};
  }
  auto file = strategy_file_from_json(j, sc);
  if (c.noise_v) file.visibility = *c.noise_v;
  std::optional<double> v;
  if (file.visibility != 1.0) v = file.visibility;
  return {file.resolve(sc), "custom:" + fnv1a_hex(j.dump()), v};
}

inline RandomnessSource make_source(const RunConfig& c, const CcpInstance& instance) {
  if (c.randomness == "prng") return RandomnessSource::prng(*c.seed);
  if (c.randomness.rfind("file:", 0) == 0) return bit_file_load(c.randomness.substr(5));
  const std::string target = c.randomness.substr(7);
  if (!is_url(target)) return beacon_load(target);
  const std::uint64_t bits = *c.rounds * bits_per_round(instance);
  const std::size_t records = static_cast<std::size_t>((bits + kBeaconRecordBits - 1) / kBeaconRecordBits);
  return beacon_fetch(target, c.beacon_first, records, c.beacon_cache);
}

inline json correlators_json(const CorrelatorTable& t) {
  json a = json::array();
  for (double e : t.values) a.push_back(e);
  return a;
}

struct Output {
  std::string text;
  int exit_code = 0;
};

inline Output run_bound(const RunConfig& c) {
  const auto ineq = inequality_from_json(*c.inequality);
  const Parallelism par{c.threads};
  const auto cb = classical_bound(ineq, par);
  json r{{"classical_bound", number(cb.value)},
         {"success_bound", number(0.5 + cb.value / (2.0 * ineq.gamma()))},
         {"gamma", number(ineq.gamma())},
         {"inequality", ineq.name()},
         {"strategies_enumerated", cb.strategies},
         {"witness", witness_json(cb.witness)}};
  if (c.ccp != "none") {
    const auto family = c.ccp == "full" ? MessageFamily::full : MessageFamily::product_form;
    const auto res = ccp_exhaustive_bound(CcpInstance(ineq), family,
                                          c.allow_long ? kLongRunningCcpGuard : kDefaultCcpGuard, par);
    json per = json::array();
    for (double p : res.per_party) per.push_back(number(p));
    r["ccp"] = json{{"family", to_string(family)},
                    {"best_success", number(res.best)},
                    {"best_party", res.best_party + 1},
                    {"per_party", per},
                    {"strategies_enumerated", res.strategies}};
  }
  if (c.format == "csv") {
    std::ostringstream os;
    os << "classical_bound,success_bound,gamma\n" << r["classical_bound"].dump() << ',' << r["success_bound"].dump()
       << ',' << r["gamma"].dump() << '\n';
    return {os.str()};
  }
  return {r.dump(2) + '\n'};
}

inline Output run_optimize(const RunConfig& c) {
  const auto ineq = inequality_from_json(*c.inequality);
  OptimizerOptions o;
  o.restarts = c.restarts;
  o.tol = c.tol;
  o.seed = *c.seed;
  o.optimize_state = c.optimize_state;
  o.parallelism = Parallelism{c.threads};
  const auto res = optimize(ineq, o);
  const auto& sc = ineq.scenario();
  if (c.format == "csv") return {correlators_to_csv(correlator_table(res.strategy), sc.parties())};
  json r{{"bell_value", res.best_value},
         {"success", success_probability(res.best_value, ineq.gamma())},
         {"gamma", number(ineq.gamma())},
         {"inequality", ineq.name()},
         {"restarts", c.restarts},
         {"best_restart", res.best_restart},
         {"sweeps", res.sweeps_used},
         {"degenerate_updates", res.degenerate_updates},
         {"strategy", strategy_to_json(sc, std::get<PureState>(res.strategy.state), res.strategy.observables)}};
  return {r.dump(2) + '\n'};
}

inline Output run_eval(const RunConfig& c) {
  const auto ineq = inequality_from_json(*c.inequality);
  const auto rs = resolve_strategy(c, ineq);
  const auto& sc = ineq.scenario();
  CorrelatorTable table;
  if (const auto* q = std::get_if<QuantumStrategy>(&rs.strategy)) {
    table = correlator_table(*q);
  } else {
    const auto& d = std::get<DeterministicStrategy>(rs.strategy);
    for (TupleIndex x = 0; x < sc.tuple_count(); ++x) table.values.push_back(d.parity(sc, x));
  }
  if (c.format == "csv") return {correlators_to_csv(table, sc.parties())};
  const double b = bell_value(table, ineq);
  json r{{"bell_value", number(b)},
         {"success", number(success_probability(b, ineq.gamma()))},
         {"exact_success", number(exact_success(CcpInstance(ineq), rs.strategy))},
         {"gamma", number(ineq.gamma())},
         {"inequality", ineq.name()},
         {"strategy", rs.label},
         {"visibility_v", rs.visibility ? json(*rs.visibility) : json(1.0)},
         {"correlators", correlators_json(table)}};
  return {r.dump(2) + '\n'};
}

inline Output run_simulate(const RunConfig& c) {
  const auto ineq = inequality_from_json(*c.inequality);
  const CcpInstance instance(ineq);
  const auto rs = resolve_strategy(c, ineq);
  const auto source = make_source(c, instance);
  SessionOptions so;
  so.keep_rounds = false;
  so.outcome_seed = *c.seed;
  so.parallelism = Parallelism{c.threads};
  std::ofstream log;
  if (!c.log.empty()) {
    log.open(c.log);
    if (!log) throw ValidationError("cannot write session log '" + c.log + "'");
    log << json{{"config", config_to_json(c)},
                {"seed", *c.seed},
                {"generator", Xoshiro256::name()},
                {"randomness", source.label()},
                {"strategy_hash", fnv1a_hex(c.strategy->dump())}}
               .dump()
        << '\n';
    so.on_round = [&log](const RoundRecord& r) { log << round_to_json(r).dump() << '\n'; };
  }
  const auto s = run_session(instance, rs.strategy, *c.rounds, source, so);
  const double exact = exact_success(instance, rs.strategy);
  if (c.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(12) << "rounds,successes,estimate,std_error,exact_success\n"
       << s.round_count << ',' << s.successes << ',' << s.estimate << ',' << s.std_error << ',' << exact << '\n';
    return {os.str()};
  }
  json r = session_summary(s);
  r["exact_success"] = exact;
  r["inequality"] = ineq.name();
  r["strategy"] = rs.label;
  r["randomness"] = s.randomness;
  r["generator"] = s.generator;
  r["seed"] = *c.seed;
  return {r.dump(2) + '\n'};
}

inline Output run_verify(const RunConfig& c) {
  std::vector<BellInequality> targets;
  if (c.inequality)
    targets.push_back(inequality_from_json(*c.inequality));
  else
    targets = {gyni_inequality(), svetlichny_inequality()};
  json checks = json::array();
  bool all = true;
  std::ostringstream csv;
  csv << std::setprecision(6) << "inequality,strategies,max_deviation,passed\n";
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto& ineq = targets[t];
    const CcpInstance instance(ineq);
    double worst = 0;
    for (unsigned k = 0; k < c.count; ++k) {
      Xoshiro256 rng(derive_seed(*c.seed, t, k));
      const auto q = random_quantum_strategy(ineq.scenario(), rng);
      const double predicted = success_probability(bell_value(q, ineq), ineq.gamma());
      worst = std::max(worst, std::abs(exact_success(instance, q) - predicted));
    }
    const bool ok = worst <= kTolerance;
    all = all && ok;
    checks.push_back(json{{"inequality", ineq.name()}, {"strategies", c.count}, {"max_deviation", worst}, {"passed", ok}});
    csv << ineq.name() << ',' << c.count << ',' << worst << ',' << (ok ? "true" : "false") << '\n';
  }
  const int code = all ? 0 : 2;
  if (c.format == "csv") return {csv.str(), code};
  return {json{{"checks", checks}, {"passed", all}}.dump(2) + '\n', code};
}

struct ReportRow {
  std::string quantity;
  double paper;
  double computed;
  double tolerance;
};

inline std::vector<ReportRow> report_rows(Parallelism par = {}) {
  const auto g = gyni_inequality(), s = svetlichny_inequality();
  const double bg = classical_bound(g, par).value, bs = classical_bound(s, par).value;
  const double qg = bell_value(gyni_paper_strategy(), g), qs = bell_value(svetlichny_paper_strategy(), s);
  return {
      {"GYNI classical bound", 6, bg, 0},
      {"GYNI classical success bound", 0.875, 0.5 + bg / 16, 0},
      {"GYNI quantum value", 7.391, qg, 5e-4},
      {"GYNI quantum success", 0.962, success_probability(qg, 8), 5e-4},
      {"Svetlichny classical bound", 4, bs, 0},
      {"Svetlichny classical success bound", 0.75, 0.5 + bs / 16, 0},
      {"Svetlichny quantum value", 4 * std::sqrt(2.0), qs, 1e-9},
      {"Svetlichny quantum success", 0.853, success_probability(qs, 8), 1e-3},
      {"Success from measured 7.023", 0.9389, success_probability(7.023, 8), 5e-5},
  };
}

inline Output run_report(const RunConfig& c) {
  const auto rows = report_rows(Parallelism{c.threads});
  bool all = true;
  json arr = json::array();
  std::ostringstream csv;
  csv << std::setprecision(12) << "quantity,paper,computed,tolerance,match\n";
  for (const auto& r : rows) {
    const bool ok = std::abs(r.computed - r.paper) <= r.tolerance + 1e-12;
    all = all && ok;
    arr.push_back(json{{"quantity", r.quantity},
                       {"paper", number(r.paper)},
                       {"computed", number(r.computed)},
                       {"tolerance", r.tolerance},
                       {"match", ok}});
    csv << r.quantity << ',' << r.paper << ',' << r.computed << ',' << r.tolerance << ',' << (ok ? "true" : "false")
        << '\n';
  }
  const int code = all ? 0 : 2;
  if (c.format == "csv") return {csv.str(), code};
  return {json{{"rows", arr}, {"all_match", all}}.dump(2) + '\n', code};
}

}  // namespace detail

/// Executes one fully specified run and returns its exit code.
inline int execute(const RunConfig& c, std::ostream& out) {
  validate(c);
  detail::Output o;
  if (c.command == "bound") o = detail::run_bound(c);
  else if (c.command == "optimize") o = detail::run_optimize(c);
  else if (c.command == "eval") o = detail::run_eval(c);
  else if (c.command == "simulate") o = detail::run_simulate(c);
  else if (c.command == "verify") o = detail::run_verify(c);
  else o = detail::run_report(c);
  if (c.out.empty()) {
    out << o.text;
  } else {
    std::ofstream f(c.out);
    if (!f) throw ValidationError("cannot write '" + c.out + "'");
    f << o.text;
  }
  return o.exit_code;
}

namespace detail {

struct Flags {
  std::string ineq, strategy, config, randomness, format, out, log, ccp, beacon_cache;
  std::uint64_t rounds = 0, seed = 0, beacon_first = 1;
  unsigned restarts = 0, threads = 0, count = 0;
  double tol = 0, noise_v = 0;
  bool dump_config = false, allow_long = false, optimize_state = false;
};

inline void add_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--ineq", f.ineq, "gyni | svetlichny | chsh | path to inequality JSON");
  sub.add_option("--strategy", f.strategy,
                 "gyni-paper | svetlichny-paper | experiment-like | classical-witness | path to strategy JSON");
  sub.add_option("--rounds", f.rounds, "protocol rounds");
  sub.add_option("--seed", f.seed, "seed for every random choice");
  sub.add_option("--restarts", f.restarts, "optimizer restarts (default 32)");
  sub.add_option("--tol", f.tol, "optimizer convergence tolerance (default 1e-12)");
  sub.add_option("--threads", f.threads, "worker thread cap, 0 = all cores");
  sub.add_option("--noise-v", f.noise_v, "white-noise visibility v in [0,1]");
  sub.add_option("--randomness", f.randomness, "prng | file:PATH | beacon:PATH | beacon:URL-with-{i}");
  sub.add_option("--beacon-first", f.beacon_first, "first record index when fetching beacon records");
  sub.add_option("--beacon-cache", f.beacon_cache, "where fetched beacon records are cached");
  sub.add_option("--out", f.out, "write results here instead of stdout");
  sub.add_option("--log", f.log, "simulate: write the session log (JSON lines) here");
  sub.add_option("--format", f.format, "json | csv");
  sub.add_option("--ccp", f.ccp, "bound: also search classical protocols (none | product | full)");
  sub.add_option("--count", f.count, "verify: random strategies per inequality (default 100)");
  sub.add_option("--config", f.config, "load a run configuration; flags given here override it");
  sub.add_flag("--dump-config", f.dump_config, "print the resolved configuration and exit");
  sub.add_flag("--allow-long", f.allow_long, "raise the CCP search guard");
  sub.add_flag("--optimize-state", f.optimize_state, "optimize: also update the state");
}

inline RunConfig build_config(const std::string& command, const CLI::App& sub, const Flags& f) {
  RunConfig c;
  if (sub.count("--config")) {
    c = config_from_json(load_json_file(f.config));
    if (!c.command.empty() && c.command != command)
      throw ValidationError("config is for '" + c.command + "' but the command is '" + command + "'");
  }
  c.command = command;
  if (sub.count("--ineq")) c.inequality = inequality_source(f.ineq);
  if (sub.count("--strategy")) c.strategy = strategy_source(f.strategy);
  if (sub.count("--rounds")) c.rounds = f.rounds;
  if (sub.count("--seed")) c.seed = f.seed;
  if (sub.count("--restarts")) c.restarts = f.restarts;
  if (sub.count("--tol")) c.tol = f.tol;
  if (sub.count("--threads")) c.threads = f.threads;
  if (sub.count("--noise-v")) c.noise_v = f.noise_v;
  if (sub.count("--randomness")) c.randomness = f.randomness;
  if (sub.count("--beacon-first")) c.beacon_first = f.beacon_first;
  if (sub.count("--beacon-cache")) c.beacon_cache = f.beacon_cache;
  if (sub.count("--out")) c.out = f.out;
  if (sub.count("--log")) c.log = f.log;
  if (sub.count("--format")) c.format = f.format;
  if (sub.count("--ccp")) c.ccp = f.ccp;
  if (sub.count("--count")) c.count = f.count;
  if (f.allow_long) c.allow_long = true;
  if (f.optimize_state) c.optimize_state = true;
  return c;
}

}  // namespace detail

/// argv-style entry point (args excludes the program name).
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Bell inequalities with communication: bounds, optimization and protocol simulation", "bellcc"};
  app.require_subcommand(1);
  detail::Flags flags;
  static const std::vector<std::pair<std::string, std::string>> descriptions{
      {"bound", "exact classical bound by strategy enumeration"},
      {"optimize", "see-saw optimization of the quantum value"},
      {"eval", "Bell value and success probability of a strategy"},
      {"simulate", "run protocol sessions round by round"},
      {"verify", "check P = 1/2 + B/(2 Gamma) on random strategies"},
      {"report", "reproduce the published numbers"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : descriptions) {
    auto* s = app.add_subcommand(name, desc);
    detail::add_flags(*s, flags);
    subs.push_back(s);
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  const CLI::App* sub = nullptr;
  for (auto* s : subs)
    if (s->parsed()) sub = s;
  try {
    const RunConfig c = detail::build_config(sub->get_name(), *sub, flags);
    if (flags.dump_config) {
      validate(c);
      out << config_to_json(c).dump(2) << '\n';
      return 0;
    }
    return execute(c, out);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline int run_command(int argc, char** argv) {
  return run_command(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace bellcc::cli
