#pragma once

#include <cstdint>
#include <random>

namespace insbench {

// splitmix64 mixer, used to derive independent sub-stream seeds from one
// root seed. Good avalanche, cheap, and stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fixed stream identifiers. Each sensor draws from its own engine, so the
// draw pattern of one stream never shifts another.
enum class Stream : std::uint64_t {
  ImuGyro = 0x11,
  ImuAccel = 0x12,
  GnssPos = 0x21,
  GnssVel = 0x22,
  Mag = 0x31,
  Attack = 0x41,
};

inline std::mt19937_64 substream(std::uint64_t root, Stream s) {
  return std::mt19937_64(splitmix64(root ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s))));
}

// Keyed engine: deterministic in (root, stream, index). Used where a draw
// must be reproducible per epoch regardless of how many epochs ran before.
inline std::mt19937_64 substream_at(std::uint64_t root, Stream s, std::uint64_t index) {
  const std::uint64_t k = splitmix64(root ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s)));
  return std::mt19937_64(splitmix64(k ^ (0xbf58476d1ce4e5b9ULL * (index + 1))));
}

}  // namespace insbench
