#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ustlab {

using Rng = std::mt19937_64;

// Recorded in run manifests.
inline constexpr std::string_view kRngIdentifier = "mt19937_64; stream seed = splitmix64(master ^ splitmix64(index))";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial stream seed; identical (master, index) always gives the same stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

// Uniform on the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace ustlab
