#include <catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "bellcc/beacon.hpp"
#include "bellcc/beacon_fetch.hpp"
#include "bellcc/protocol.hpp"

using namespace bellcc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const auto p = fs::temp_directory_path() / ("bellcc_test_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::string record(char digit) { return std::string(kBeaconRecordHexChars, digit); }

}  // namespace

TEST_CASE("all-ones record yields +1 signs", "[beacon]") {
  auto src = beacon_load(temp_file("ones.hex", record('f') + "\n"));
  CHECK(src.remaining() == 512u);
  for (int i = 0; i < 8; ++i) CHECK(src.fair_sign() == 1);
}

TEST_CASE("records are read in order, most significant bit first", "[beacon]") {
  const auto path = temp_file("order.hex", "# header\n\n" + record('0') + "\r\n  " + record('8') + "  \n");
  auto src = beacon_load(path);
  CHECK(src.remaining() == 1024u);
  CHECK(src.bits(64) == 0);
  for (int i = 0; i < 7; ++i) src.bits(64);
  CHECK(src.bits(1) == 1);
  CHECK(src.bits(3) == 0);
  CHECK(src.kind() == RandomnessSource::Kind::beacon_records);
}

TEST_CASE("identical record files replay identical sessions", "[beacon]") {
  std::string text;
  Xoshiro256 rng(8);
  for (int r = 0; r < 20; ++r) {
    std::vector<std::uint8_t> bytes(64);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    text += encode_beacon_record(bytes) + "\n";
  }
  const auto a = beacon_load(temp_file("a.hex", text)), b = beacon_load(temp_file("b.hex", text));
  const CcpInstance inst(gyni_inequality());
  SessionOptions o;
  o.outcome_seed = 4;
  const auto la = run_session(inst, gyni_paper_strategy(), 1500, a, o);
  const auto lb = run_session(inst, gyni_paper_strategy(), 1500, b, o);
  CHECK(la.successes == lb.successes);
  for (std::size_t i = 0; i < la.rounds.size(); ++i) {
    REQUIRE(la.rounds[i].x == lb.rounds[i].x);
    REQUIRE(la.rounds[i].y == lb.rounds[i].y);
  }
}

TEST_CASE("malformed records name the byte offset", "[beacon]") {
  const std::string good = record('a') + "\n";
  try {
    parse_beacon_records(good + record('b').substr(0, 100) + "\n");
    FAIL("expected a parse error");
  } catch (const BeaconParseError& e) {
    CHECK(e.offset() == good.size() + 100);
    CHECK(std::string(e.what()).find("byte offset 229") != std::string::npos);
  }
  std::string bad = record('c');
  bad[10] = 'g';
  try {
    parse_beacon_records(good + bad);
    FAIL("expected a parse error");
  } catch (const BeaconParseError& e) {
    CHECK(e.offset() == good.size() + 10);
  }
  CHECK_THROWS_AS(parse_beacon_records("# only comments\n\n"), BeaconParseError);
  CHECK_THROWS_AS(beacon_load(fs::temp_directory_path() / "bellcc_test_missing.hex"), ValidationError);
}

TEST_CASE("record encoding round-trips", "[beacon]") {
  std::vector<std::uint8_t> bytes(64);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(i * 37);
  CHECK(decode_beacon_record(encode_beacon_record(bytes)) == bytes);
}

TEST_CASE("raw bit files", "[beacon]") {
  auto src = bit_file_load(temp_file("bits.bin", std::string("\x80\x01", 2)));
  CHECK(src.remaining() == 16u);
  CHECK(src.bits(1) == 1);
  CHECK(src.bits(14) == 0);
  CHECK(src.bits(1) == 1);
  CHECK_THROWS_AS(src.bits(1), RandomnessExhausted);
  CHECK_THROWS_AS(bit_file_load(temp_file("empty.bin", "")), ValidationError);
}

TEST_CASE("fetched records are cached for offline replay", "[beacon]") {
  httplib::Server server;
  std::atomic<int> hits{0};
  server.Get(R"(/pulse/(\d+))", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const int i = std::stoi(req.matches[1]);
    if (i % 2)
      res.set_content(nlohmann::json{{"pulse", {{"outputValue", record("0123456789"[i % 10])}}}}.dump(), "application/json");
    else
      res.set_content("# plain\n" + record('e') + "\n", "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const auto cache = fs::temp_directory_path() / "bellcc_test_cache.hex";
  fs::remove(cache);
  const std::string url = "http://127.0.0.1:" + std::to_string(port) + "/pulse/{i}";
  auto first = beacon_fetch(url, 5, 3, cache);
  CHECK(hits == 3);
  CHECK(first.remaining() == 3u * 512);
  CHECK(first.bits(8) == 0x55);
  auto again = beacon_fetch(url, 5, 3, cache);
  CHECK(hits == 3);
  CHECK(again.bits(8) == 0x55);
  auto more = beacon_fetch(url, 5, 4, cache);
  CHECK(hits == 4);
  CHECK(more.remaining() == 4u * 512);

  CHECK_THROWS_AS(beacon_fetch("http://127.0.0.1:" + std::to_string(port) + "/nothing/{i}", 1, 1,
                               fs::temp_directory_path() / "bellcc_test_cache2.hex"),
                  BeaconFetchError);
  CHECK_THROWS_AS(beacon_fetch("http://127.0.0.1:1/x", 1, 1, cache), ValidationError);
  server.stop();
  t.join();
}
