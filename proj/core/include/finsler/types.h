#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace finsler {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Fixed-order compensated accumulator; summation order is part of the
// reproducibility contract, so results are bit-stable across runs.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void Add(double v) {
    double t = v - comp;
    double s = sum + t;
    comp = (s - sum) - t;
    sum = s;
  }
  double Value() const { return sum; }
};

// Deterministic 64-bit generator (splitmix64) used wherever sampling must be
// seedable yet byte-reproducible across standard libraries.  std::mt19937_64
// is portable too, but the distributions are not; we draw bits directly.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform in [0,1) with 53 random bits.
  double NextDouble() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  // Uniform in [lo,hi).
  double NextInRange(double lo, double hi) { return lo + (hi - lo) * NextDouble(); }
};

// FNV-1a hash of a canonical configuration string; embedded in every report
// so that outputs are traceable to the exact configuration that produced them.
std::uint64_t HashConfigString(const std::string& text);

// Hex rendering of a 64-bit hash (16 lowercase hex digits).
std::string HashToHex(std::uint64_t h);

}  // namespace finsler
