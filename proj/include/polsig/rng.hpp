#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace polsig {

using Engine = std::mt19937_64;

// Seed for a named sub-stream of a root seed. Streams are independent of one
// another, so adding a new consumer never shifts the draws of an existing one.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finaliser
  std::uint64_t z = root ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Engine make_stream(std::uint64_t root, std::string_view name) {
  return Engine(stream_seed(root, name));
}

}  // namespace polsig
