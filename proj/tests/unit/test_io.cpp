#include <catch_amalgamated.hpp>

#include "bellcc/io.hpp"

using namespace bellcc;
using Catch::Matchers::WithinAbs;

TEST_CASE("strategy files round-trip", "[io]") {
  const auto q = gyni_paper_strategy();
  const auto j = strategy_to_json(q.scenario, std::get<PureState>(q.state), q.observables);
  CHECK(j["state"] == "ghz");
  CHECK(j["observables"].size() == 12);
  const auto f = strategy_file_from_json(json::parse(j.dump()), gyni_scenario());
  CHECK(f.observables == q.observables);
  CHECK(f.visibility == 1.0);
  CHECK_THAT(bell_value(f.resolve(gyni_scenario()), gyni_inequality()),
             WithinAbs(bell_value(q, gyni_inequality()), 1e-15));
}

TEST_CASE("strategy files with amplitudes and noise", "[io]") {
  Xoshiro256 rng(3);
  const auto q = random_quantum_strategy(svetlichny_scenario(), rng);
  const auto& psi = std::get<PureState>(q.state);
  auto j = strategy_to_json(q.scenario, psi, q.observables, 0.5);
  CHECK(j["state"].contains("amplitudes"));
  const auto f = strategy_file_from_json(j, svetlichny_scenario());
  CHECK(f.visibility == 0.5);
  CHECK_THAT(bell_value(f.resolve(svetlichny_scenario()), svetlichny_inequality()),
             WithinAbs(0.5 * bell_value(q, svetlichny_inequality()), 1e-12));
}

TEST_CASE("malformed strategy files are rejected", "[io]") {
  const auto q = svetlichny_paper_strategy();
  const auto good = strategy_to_json(q.scenario, ghz_state(3), q.observables);
  const auto& sc = svetlichny_scenario();

  auto missing = good;
  missing["observables"].erase(missing["observables"].begin());
  CHECK_THROWS_WITH(strategy_file_from_json(missing, sc), Catch::Matchers::ContainsSubstring("no observable"));

  auto dup = good;
  dup["observables"].push_back(dup["observables"][0]);
  CHECK_THROWS_WITH(strategy_file_from_json(dup, sc), Catch::Matchers::ContainsSubstring("duplicate"));

  auto wrong_len = good;
  wrong_len["observables"][0]["setting"] = json::array({1});
  CHECK_THROWS_AS(strategy_file_from_json(wrong_len, sc), ValidationError);

  auto bad_bloch = good;
  bad_bloch["observables"][0]["bloch"] = json::array({2, 0, 0});
  CHECK_THROWS_AS(strategy_file_from_json(bad_bloch, sc), InvalidBlochVector);

  auto bad_v = good;
  bad_v["visibility_v"] = 1.5;
  CHECK_THROWS_AS(strategy_file_from_json(bad_v, sc), ValidationError);

  auto bad_state = good;
  bad_state["state"] = json{{"amplitudes", json::array({json::array({1, 0}), json::array({1, 0})})}};
  CHECK_THROWS_AS(strategy_file_from_json(bad_state, sc), ValidationError);

  auto bad_party = good;
  bad_party["observables"][0]["party"] = 4;
  CHECK_THROWS_AS(strategy_file_from_json(bad_party, sc), ValidationError);
}

TEST_CASE("inequality files", "[io]") {
  const auto j = json::parse(R"({"scenario": {"n": 2, "visibility": [[1], [2]]},
                                 "coeffs": [{"x": [-1, -1], "q": 1}, {"x": [1, 1], "q": -0.5}]})");
  const auto ineq = inequality_from_json(j);
  CHECK(ineq.coeff(0) == 1);
  CHECK(ineq.coeff(1) == 0);
  CHECK(ineq.coeff(3) == -0.5);
  CHECK(ineq.gamma() == 1.5);
  CHECK(inequality_from_json(json{{"name", "gyni"}}) == gyni_inequality());
  CHECK(inequality_to_json(gyni_inequality()) == json{{"name", "gyni"}});

  auto dup = j;
  dup["coeffs"].push_back(dup["coeffs"][0]);
  CHECK_THROWS_AS(inequality_from_json(dup), ValidationError);
  auto bad_x = j;
  bad_x["coeffs"][0]["x"] = json::array({1, 0});
  CHECK_THROWS_AS(inequality_from_json(bad_x), ValidationError);
  CHECK_THROWS_AS(inequality_from_json(json{{"name", "bogus"}}), ValidationError);
  CHECK_THROWS_AS(scenario_from_json(json{{"n", 2}}), ValidationError);
}

TEST_CASE("correlator CSV", "[io]") {
  const auto t = correlator_table(svetlichny_paper_strategy());
  const auto csv = correlators_to_csv(t, 3);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x_1,x_2,x_3,E");
  std::getline(in, line);
  CHECK(line.rfind("-1,-1,-1,", 0) == 0);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);

  CorrelatorTable simple{{1.0 / 3, -0.0, 1, -1}};
  CHECK(correlators_to_csv(simple, 2) == "x_1,x_2,E\n-1,-1,0.333333333333\n-1,1,0\n1,-1,1\n1,1,-1\n");
}

TEST_CASE("round records round-trip through JSON lines", "[io]") {
  RoundRecord r{{1, -1, 1}, {-1, -1, 1}, {{1, 1}, {-1, 1}, {1, -1}}, {1, 1, -1}, {-1, -1, -1}, -1, -1, true};
  const auto j = round_to_json(r);
  CHECK(j.dump() ==
        R"({"x":[1,-1,1],"y":[-1,-1,1],"settings":[[1,1],[-1,1],[1,-1]],"a":[1,1,-1],"m":[-1,-1,-1],"guess":-1,"f_value":-1,"pass":true})");
  const auto back = round_from_json(json::parse(j.dump()));
  CHECK(back.x == r.x);
  CHECK(back.settings == r.settings);
  CHECK(back.pass == r.pass);
}

TEST_CASE("FNV-1a hash", "[io]") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
