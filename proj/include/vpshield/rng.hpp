// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace vpshield {

/// Deterministic uniform-variate stream.
///
/// std::mt19937_64 has a standard-mandated output sequence, but the
/// std distributions do not, so uniforms are derived here explicitly
/// and every downstream sampler is built on them. Identical seeds give
/// bit-identical streams on any conforming implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t seed() const { return seed_; }

  /// Derive an independent stream (e.g. one per species) by
  /// splitmix-style mixing of (seed, tag).
  RngStream substream(std::uint64_t tag) const {
    std::uint64_t s = seed_ + (tag + 1) * 0x9e3779b97f4a7c15ULL;
    s ^= s >> 30;
    s *= 0xbf58476d1ce4e5b9ULL;
    s ^= s >> 27;
    s *= 0x94d049bb133111ebULL;
    s ^= s >> 31;
    return RngStream(s);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace vpshield
