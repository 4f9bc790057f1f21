#pragma once

// Fetches beacon records over HTTP(S) and caches them as a record file, so a
// replay of the same session never touches the network. Only the CLI pulls
// this in; the library core does no network I/O.
//
// The URL is a template in which "{i}" is replaced by the record index. A
// response is either a JSON pulse carrying "outputValue" (top level or under
// "pulse") or plain text whose first record line is used.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "bellcc/beacon.hpp"
#include "bellcc/core.hpp"

namespace bellcc {

class BeaconFetchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline bool is_url(const std::string& s) { return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0; }

namespace detail {

inline std::string extract_record(const std::string& body, const std::string& url) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_discarded() && j.is_object()) {
    const auto& pulse = j.contains("pulse") ? j["pulse"] : j;
    if (pulse.is_object() && pulse.contains("outputValue") && pulse["outputValue"].is_string())
      return pulse["outputValue"].get<std::string>();
    throw BeaconFetchError("response from '" + url + "' has no outputValue");
  }
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t end = body.find('\n', pos);
    if (end == std::string::npos) end = body.size();
    std::string line = body.substr(pos, end - pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    line = line.substr(lead);
    if (!line.empty() && line.front() != '#') return line;
    pos = end + 1;
  }
  throw BeaconFetchError("response from '" + url + "' is empty");
}

inline std::string fetch_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.rfind("https://", 0) == 0) throw BeaconFetchError("this build has no TLS support; cannot fetch '" + url + "'");
#endif
  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  auto res = client.Get(path);
  if (!res) throw BeaconFetchError("request to '" + url + "' failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BeaconFetchError("request to '" + url + "' returned HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace detail

/// Ensures `cache` holds at least `count` records fetched from indices
/// first, first+1, ...; records already cached are not fetched again.
inline RandomnessSource beacon_fetch(const std::string& url_template, std::uint64_t first, std::size_t count,
                                     const std::filesystem::path& cache) {
  if (url_template.find("{i}") == std::string::npos)
    throw ValidationError("beacon URL must contain '{i}' where the record index goes");
  std::size_t have = 0;
  bool has_header = false;
  if (std::filesystem::exists(cache)) {
    std::istringstream lines(read_text_file(cache));
    for (std::string line; std::getline(lines, line);) {
      const auto first_char = line.find_first_not_of(" \t\r");
      if (first_char == std::string::npos) continue;
      if (line[first_char] == '#')
        has_header = true;
      else
        ++have;
    }
  }
  if (have < count) {
    std::ofstream out(cache, std::ios::app);
    if (!out) throw ValidationError("cannot write beacon cache '" + cache.string() + "'");
    for (std::size_t k = have; k < count; ++k) {
      std::string url = url_template;
      url.replace(url.find("{i}"), 3, std::to_string(first + k));
      const std::string rec = detail::extract_record(detail::fetch_url(url), url);
      decode_beacon_record(rec);  // reject malformed records before caching them
      if (!has_header) {
        out << "# beacon records from " << url_template << " starting at " << first << '\n';
        has_header = true;
      }
      out << rec << '\n';
      out.flush();
    }
  }
  return beacon_load(cache);
}

}  // namespace bellcc
