#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ssmf {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-stream seed derivation, so trial k of a run with seed s draws
// from the same generator regardless of how work is split across threads.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

// mt19937_64 with an explicit 53-bit mapping to doubles. The engine output is
// pinned by the standard, and the mapping avoids generate_canonical, whose
// result is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, 1)
  double uniform01() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // uniform integer in [lo, hi]
  int uniform_int(int lo, int hi) {
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

// Cumulative sums with the last entry forced to 1; weights are assumed
// normalized up to rounding.
inline std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

// Index of the first cdf entry exceeding a uniform draw.
inline int sample_index(Rng& rng, std::span<const double> cdf) {
  double u = rng.uniform01();
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
    if (u < cdf[i]) return int(i);
  }
  return int(cdf.size()) - 1;
}

}  // namespace ssmf
