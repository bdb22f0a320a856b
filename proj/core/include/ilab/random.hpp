#pragma once

#include <cstdint>
#include <random>

namespace ilab {

// Derives an independent stream seed from a master seed and a stream index.
// Counter-based: two SplitMix64 rounds over master ^ f(index), so distinct
// indices decorrelate even for adjacent masters.
std::uint64_t seed_split(std::uint64_t master, std::uint64_t stream_index);

// Random stream with generator-independent output: uniforms come from the
// top 53 bits of mt19937_64 and normals from Box-Muller, so identical seeds
// give identical draws on every platform.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal();

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Complex standard normal split into parts: Re, Im each N(0, 1/2).
  void complex_normal_unit(double& re, double& im) {
    re = normal() * half_sqrt_;
    im = normal() * half_sqrt_;
  }

private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
  static constexpr double half_sqrt_ = 0.7071067811865476;  // 1/sqrt(2)
};

}  // namespace ilab
