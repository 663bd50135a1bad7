#pragma once

#include <cstdint>
#include <random>

namespace mixkde {

//! Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double
uniform01(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

//! Two rounds of multiply-xor-shift.
inline std::uint64_t
mix64(std::uint64_t x)
{
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

//! Seed of one (n, replicate) cell of a risk experiment.
inline std::uint64_t
cell_seed(std::uint64_t master, std::uint64_t n, std::uint64_t replicate)
{
  std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ n);
  return mix64(h ^ (replicate + 0x632be59bd9b4e019ULL));
}

} // namespace mixkde
