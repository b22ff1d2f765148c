// Counter-based splittable uniform streams.
//
// Every random quantity in a run is addressed, not consumed: the i-th output
// of a stream is mix64(key + (i+1)*gamma), so any position can be read in
// O(1), in any order, from any thread. Child streams are derived by hashing
// (parent key, child index), which is what makes per-replication and
// per-step substreams independent of scheduling. Coupled processes read the
// same addresses and therefore see bit-identical uniforms.

#pragma once

#include <cstdint>
#include <stdexcept>

namespace urnlab::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Two mixing rounds so that (parent, index) pairs with shared structure
// (consecutive replication indices, step numbers) land far apart.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(parent ^ mix64(index * kGolden + 0x6A09E667F3BCC909ull));
}

// [0,1) with 53 random bits.
constexpr double to_unit(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// (0,1); safe under log().
constexpr double to_unit_open(std::uint64_t x) noexcept {
  return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

struct Stream {
  std::uint64_t key = 0;

  std::uint64_t at(std::uint64_t i) const noexcept { return mix64(key + (i + 1) * kGolden); }
  double unit_at(std::uint64_t i) const noexcept { return to_unit(at(i)); }
  Stream child(std::uint64_t index) const noexcept { return Stream{derive_key(key, index)}; }
};

// Sequential facade over a Stream for samplers that consume a variable
// number of uniforms (rejection loops). Position is part of the value, so a
// fresh Sequence over the same stream replays identically.
class Sequence {
 public:
  explicit Sequence(Stream s) noexcept : stream_(s) {}

  std::uint64_t next_u64() noexcept { return stream_.at(pos_++); }
  double next_unit() noexcept { return to_unit(stream_.at(pos_++)); }
  double next_unit_open() noexcept { return to_unit_open(stream_.at(pos_++)); }
  std::uint64_t position() const noexcept { return pos_; }

 private:
  Stream stream_;
  std::uint64_t pos_ = 0;
};

// Substream roles within one replication. Color draws, the two
// reinforcement sequences and the policy auxiliaries are independent
// streams so coupled processes can share exactly the ones the construction
// shares.
enum class Role : std::uint64_t {
  kColorDraw = 0,
  kReinforceRed = 1,
  kReinforceWhite = 2,
  kPolicyAux = 3,
};

struct ReplicationStreams {
  Stream color;
  Stream reinforce_red;
  Stream reinforce_white;
  Stream policy_aux;

  static ReplicationStreams make(std::uint64_t seed, std::uint64_t replication_index) noexcept {
    const Stream root{mix64(seed + 0x243F6A8885A308D3ull)};
    const Stream rep = root.child(replication_index);
    return ReplicationStreams{
        rep.child(static_cast<std::uint64_t>(Role::kColorDraw)),
        rep.child(static_cast<std::uint64_t>(Role::kReinforceRed)),
        rep.child(static_cast<std::uint64_t>(Role::kReinforceWhite)),
        rep.child(static_cast<std::uint64_t>(Role::kPolicyAux)),
    };
  }

  // Per-step sequences: keyed by absolute step, independent of how many
  // values earlier steps consumed.
  Sequence reinforce_red_at(std::uint64_t step) const noexcept {
    return Sequence(reinforce_red.child(step));
  }
  Sequence reinforce_white_at(std::uint64_t step) const noexcept {
    return Sequence(reinforce_white.child(step));
  }
  Sequence policy_aux_at(std::uint64_t step) const noexcept {
    return Sequence(policy_aux.child(step));
  }
  double color_uniform_at(std::uint64_t step) const noexcept { return color.unit_at(step); }
};

}  // namespace urnlab::rng
