// Copyright 2026 The gramdiff Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gramdiff {

/// splitmix64 finalizer; used to derive independent seed streams from one
/// root seed without correlation between streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random source. Every bounded draw goes through below(),
/// never std::uniform_int_distribution, so a trace replays byte-identically
/// on any platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Derives the stream_id-th independent stream of a root seed.
  static Rng stream(std::uint64_t root, std::uint64_t stream_id) {
    return Rng(mix64(root ^ mix64(stream_id + 0x51ed2701a9b5e2b3ULL)));
  }

  std::uint64_t next() { return engine_(); }

  /// Unbiased draw in [0, n). Pre: n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();  // rejection keeps the draw unbiased
    return v % n;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(p[i - 1], p[index(i)]);
    }
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gramdiff
