#pragma once

// Randomness-beacon record files: one hex-encoded 512-bit record per line.
// Records are concatenated in file order and read most-significant bit first.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bellcc/core.hpp"
#include "bellcc/random.hpp"

namespace bellcc {

inline constexpr std::size_t kBeaconRecordBits = 512;
inline constexpr std::size_t kBeaconRecordHexChars = kBeaconRecordBits / 4;

class BeaconParseError : public ValidationError {
 public:
  BeaconParseError(const std::string& what, std::size_t offset)
      : ValidationError(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {
inline int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace detail

/// Decodes one record (exactly 128 hex digits) to 64 bytes.
inline std::vector<std::uint8_t> decode_beacon_record(std::string_view hex, std::size_t base_offset = 0) {
  if (hex.size() != kBeaconRecordHexChars)
    throw BeaconParseError("beacon record has " + std::to_string(hex.size()) + " hex digits, expected " +
                               std::to_string(kBeaconRecordHexChars),
                           base_offset + hex.size());
  std::vector<std::uint8_t> out;
  out.reserve(kBeaconRecordBits / 8);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = detail::hex_value(hex[i]), lo = detail::hex_value(hex[i + 1]);
    if (hi < 0) throw BeaconParseError("malformed hex digit '" + std::string(1, hex[i]) + "'", base_offset + i);
    if (lo < 0) throw BeaconParseError("malformed hex digit '" + std::string(1, hex[i + 1]) + "'", base_offset + i + 1);
    out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return out;
}

/// Parses a whole record file. Blank lines and lines starting with '#' are skipped.
inline std::vector<std::uint8_t> parse_beacon_records(std::string_view text) {
  std::vector<std::uint8_t> bytes;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    std::size_t trail = line.size();
    while (trail > lead && std::isspace(static_cast<unsigned char>(line[trail - 1]))) --trail;
    const std::string_view body = line.substr(lead, trail - lead);
    if (!body.empty() && body.front() != '#') {
      const auto rec = decode_beacon_record(body, pos + lead);
      bytes.insert(bytes.end(), rec.begin(), rec.end());
    }
    pos = end + 1;
  }
  if (bytes.empty()) throw BeaconParseError("beacon file contains no records", 0);
  return bytes;
}

inline std::string encode_beacon_record(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string s;
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Record file -> randomness source.
inline RandomnessSource beacon_load(const std::filesystem::path& path) {
  return RandomnessSource::from_bytes(RandomnessSource::Kind::beacon_records, parse_beacon_records(read_text_file(path)),
                                      "beacon:" + path.string());
}

/// Raw binary file -> randomness source, bytes read most-significant bit first.
inline RandomnessSource bit_file_load(const std::filesystem::path& path) {
  const std::string raw = read_text_file(path);
  if (raw.empty()) throw ValidationError("bit file '" + path.string() + "' is empty");
  return RandomnessSource::from_bytes(RandomnessSource::Kind::bit_file, std::vector<std::uint8_t>(raw.begin(), raw.end()),
                                      "file:" + path.string());
}

}  // namespace bellcc
