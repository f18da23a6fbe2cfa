#pragma once

#include <cmath>
#include <cstdint>

namespace mcascade {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's public-domain constants).
// Used both as the stream generator step and as the keyed node hash mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kLane1 = 0xd1b54a32d192ed03ULL;
inline constexpr std::uint64_t kLane2 = 0x8cb92ba72f3d8dd7ULL;
inline constexpr double kInv53 = 0x1.0p-53;
}  // namespace detail

/// Sequential pseudorandom stream (SplitMix64). Streams are cheap values;
/// parallel callers derive disjoint streams from (master seed, stream id).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Deterministic substream: mixes (master, stream, purpose) into a fresh
  /// state so ensemble workers never share a sequence.
  static Rng stream(std::uint64_t master, std::uint64_t stream_id,
                    std::uint64_t purpose = 0) {
    std::uint64_t s = mix64(master + detail::kGolden * (stream_id + 1));
    s = mix64(s ^ (detail::kLane1 * (purpose + 1)));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_u01() {
    return static_cast<double>(next_u64() >> 11) * detail::kInv53;
  }

  /// Uniform double in (0, 1); safe as a log/Box-Muller argument.
  double next_u01_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * detail::kInv53;
  }

  /// Standard normal via Box-Muller (two uniforms per draw, no cache).
  double next_normal() {
    const double u1 = next_u01_open();
    const double u2 = next_u01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

/// 128-bit fingerprint of a tree path, built incrementally symbol by symbol.
/// Two lanes, both absorbing the symbol, so distinct words get distinct keys
/// up to a ~2^-128 birthday bound at desk scale.
struct NodeKey {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  static NodeKey root(std::uint64_t seed) {
    return {mix64(seed ^ detail::kLane1), mix64(seed + detail::kLane2)};
  }

  NodeKey child(int symbol) const {
    const std::uint64_t s = static_cast<std::uint64_t>(symbol) + 1;
    NodeKey k;
    k.a = mix64(a ^ (detail::kGolden * s));
    k.b = mix64(b + rotl64(a, 29) + detail::kLane2 * s);
    return k;
  }
};

/// Counter-based uniform stream keyed by a NodeKey: random access to the
/// draws of one tree node without storing the tree.
class CounterStream {
 public:
  explicit CounterStream(NodeKey key) : key_(key) {}

  std::uint64_t next_u64() {
    const std::uint64_t c = counter_++;
    return mix64(key_.a + detail::kGolden * c) ^
           mix64(key_.b ^ (detail::kLane1 * c + detail::kLane2));
  }

  double next_u01() {
    return static_cast<double>(next_u64() >> 11) * detail::kInv53;
  }

  double next_u01_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * detail::kInv53;
  }

  double next_normal() {
    const double u1 = next_u01_open();
    const double u2 = next_u01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  NodeKey key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mcascade
