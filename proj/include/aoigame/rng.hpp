#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace aoigame {

// mt19937_64 with a bit-exact uniform draw, so traces reproduce across
// standard libraries. Independent streams are derived with splitmix64.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Rng split(std::uint64_t stream) { return Rng(derive(gen_(), stream)); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace aoigame
