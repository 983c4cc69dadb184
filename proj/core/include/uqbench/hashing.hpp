#pragma once

#include <cstdint>
#include <string_view>

namespace uqbench {

// splitmix64 finalizer. Stable across platforms, which is what makes seeded
// runs reproduce byte-identically on different machines.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// FNV-1a accumulator with a splitmix finalizer. Used wherever pseudo-random
// choices must be a pure function of (seed, identifiers, ordinal).
class StableHash {
  public:
    StableHash() = default;
    explicit StableHash(std::uint64_t seed) { mix(seed); }

    StableHash& mix(std::string_view s) {
        for (unsigned char c : s) {
            state_ = (state_ ^ c) * 0x100000001b3ull;
        }
        state_ = (state_ ^ 0xff) * 0x100000001b3ull; // field separator
        return *this;
    }
    StableHash& mix(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            state_ = (state_ ^ ((v >> (8 * i)) & 0xff)) * 0x100000001b3ull;
        }
        return *this;
    }
    std::uint64_t digest() const { return splitmix64(state_); }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

// Maps a 64-bit hash onto [0, 1).
inline double unit_interval(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Small counter-based generator for deterministic shuffles.
class SplitMixStream {
  public:
    explicit SplitMixStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return splitmix64(state_);
    }

  private:
    std::uint64_t state_;
};

} // namespace uqbench
