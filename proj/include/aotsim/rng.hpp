#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Deterministic random number generation for the simulator.
//
// Every random draw in a run comes from a PCG32 substream derived from
// (run seed, slot index), so a slot's request stream is a pure function of
// the configuration. The exact recipe is part of the reproducibility
// contract (golden workload files depend on it) and is documented in the
// README; changing any step below invalidates frozen test vectors.
//
//   slot_hash(slot)  = first output of splitmix64 seeded with slot
//   stream_seed      = run_seed XOR slot_hash(slot)
//   rng              = Pcg32(a, b) with a, b = first two splitmix64
//                      outputs seeded with stream_seed

namespace aotsim {

// splitmix64 step: advances s and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Minimal PCG32 (XSH-RR 64/32) generator.
class Pcg32 {
 public:
  Pcg32(std::uint64_t initstate, std::uint64_t initseq) {
    state_ = 0u;
    inc_ = (initseq << 1u) | 1u;
    next_u32();
    state_ += initstate;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [lo, hi], both ends inclusive. Unbiased via
  // rejection of the low remainder region.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    auto range = static_cast<std::uint64_t>(hi - lo);
    if (range >= 0xFFFFFFFFULL) {
      for (;;) {
        std::uint64_t x = next_u64();
        if (range == 0xFFFFFFFFFFFFFFFFULL) return lo + static_cast<std::int64_t>(x);
        std::uint64_t r = range + 1;
        std::uint64_t t = (~r + 1) % r;
        if (x >= t) return lo + static_cast<std::int64_t>(x % r);
      }
    }
    auto r = static_cast<std::uint32_t>(range + 1);
    std::uint32_t t = (~r + 1u) % r;
    for (;;) {
      std::uint32_t x = next_u32();
      if (x >= t) return lo + static_cast<std::int64_t>(x % r);
    }
  }

  // Knuth's product-of-uniforms sampler. lambda <= 0 returns 0 without
  // consuming any draws. Adequate for the small per-slot arrival rates
  // used here; not suitable for lambda in the hundreds.
  std::int64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= next_double();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

// First splitmix64 output for a raw seed value.
inline std::uint64_t hash_u64(std::uint64_t v) {
  std::uint64_t s = v;
  return splitmix64_next(s);
}

// Per-slot substream. See file header for the derivation contract.
inline Pcg32 make_slot_rng(std::uint64_t run_seed, std::int64_t slot) {
  std::uint64_t stream_seed = run_seed ^ hash_u64(static_cast<std::uint64_t>(slot));
  std::uint64_t s = stream_seed;
  std::uint64_t a = splitmix64_next(s);
  std::uint64_t b = splitmix64_next(s);
  return Pcg32(a, b);
}

// Inverse-CDF sampler over a fixed weight vector. The CDF is the running
// sum of normalized weights with the last bucket clamped to 1, and
// sample() returns the first index whose cumulative value exceeds u.
class DiscreteCdf {
 public:
  explicit DiscreteCdf(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("DiscreteCdf: empty weights");
    double sum = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("DiscreteCdf: negative weight");
      sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("DiscreteCdf: zero total weight");
    cdf_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
      acc += w / sum;
      cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
  }

  std::size_t sample(Pcg32& rng) const {
    const double u = rng.next_double();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (u < cdf_[mid])
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  const std::vector<double>& cdf() const { return cdf_; }

 private:
  std::vector<double> cdf_;
};

}  // namespace aotsim
