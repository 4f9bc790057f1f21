#pragma once

// Seeded generators and the randomness sources that drive protocol inputs.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bellcc/core.hpp"

namespace bellcc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  static constexpr const char* name() { return "xoshiro256**/splitmix64"; }

  explicit Xoshiro256(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Seed of an independent stream identified by (seed, a, b). Used for
/// per-restart and per-block generators.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t s = seed ^ 0x6A09E667F3BCC909ull;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a * 0xD1B54A32D192ED03ull);
  h = splitmix64(s);
  s = h ^ (b * 0x8CB92BA72F3D8DD7ull);
  return splitmix64(s);
}

/// A stream of fair bits consumed most-significant-bit first. Either a seeded
/// PRNG (unbounded) or a finite byte buffer from a bit file or beacon records.
class RandomnessSource {
 public:
  enum class Kind { seeded_prng, bit_file, beacon_records };

  static RandomnessSource prng(std::uint64_t seed) {
    RandomnessSource r;
    r.kind_ = Kind::seeded_prng;
    r.seed_ = seed;
    r.gen_ = Xoshiro256(seed);
    r.label_ = std::string("prng:") + Xoshiro256::name() + ":" + std::to_string(seed);
    return r;
  }

  static RandomnessSource from_bytes(Kind kind, std::vector<std::uint8_t> bytes, std::string label) {
    if (kind == Kind::seeded_prng) throw ValidationError("byte-backed sources must be bit_file or beacon_records");
    RandomnessSource r;
    r.kind_ = kind;
    r.bytes_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
    r.label_ = std::move(label);
    return r;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return cursor_; }

  /// Bits still available; nullopt for unbounded sources.
  std::optional<std::uint64_t> remaining() const {
    if (kind_ == Kind::seeded_prng) return std::nullopt;
    return bytes_->size() * 8 - cursor_;
  }

  /// Next `count` bits (count <= 64), first bit in the most significant place.
  std::uint64_t bits(unsigned count) {
    if (count > 64) throw ValidationError("cannot draw more than 64 bits at once");
    if (auto rem = remaining(); rem && *rem < count)
      throw RandomnessExhausted("randomness source '" + label_ + "' is exhausted at bit " + std::to_string(cursor_), 0);
    std::uint64_t out = 0;
    for (unsigned i = 0; i < count; ++i) out = (out << 1) | next_bit();
    return out;
  }

  int fair_sign() { return bits(1) ? 1 : -1; }

  /// Independent source for parallel block `block` that starts `bit_offset`
  /// bits into a finite stream. PRNG sources derive a fresh stream instead.
  RandomnessSource fork(std::uint64_t block, std::uint64_t bit_offset) const {
    if (kind_ == Kind::seeded_prng) {
      RandomnessSource r = prng(derive_seed(seed_, block, 0x1));
      r.label_ = label_;
      r.seed_ = seed_;
      return r;
    }
    RandomnessSource r = *this;
    r.cursor_ = bit_offset;
    return r;
  }

 private:
  unsigned next_bit() {
    if (kind_ == Kind::seeded_prng) {
      if (buffered_ == 0) {
        word_ = gen_();
        buffered_ = 64;
      }
      --buffered_;
      ++cursor_;
      return static_cast<unsigned>((word_ >> buffered_) & 1u);
    }
    const std::uint64_t byte = cursor_ / 8;
    const unsigned shift = 7 - static_cast<unsigned>(cursor_ % 8);
    ++cursor_;
    return ((*bytes_)[byte] >> shift) & 1u;
  }

  Kind kind_ = Kind::seeded_prng;
  std::uint64_t seed_ = 0;
  Xoshiro256 gen_{0};
  std::uint64_t word_ = 0;
  unsigned buffered_ = 0;
  std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
  std::uint64_t cursor_ = 0;
  std::string label_;
};

}  // namespace bellcc
