#pragma once

#include <cstdint>

namespace policygame {

// Every batch kernel has a plain serial loop kept as the reference
// implementation and an OpenMP version. Both produce identical results.
enum class Exec { serial, parallel };

void set_thread_count(int threads);
int thread_count();

// splitmix64 finalizer; used to derive independent RNG streams from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix_seed(mix_seed(base ^ mix_seed(stream)) + index);
}

}  // namespace policygame
