#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace rumor {

/// Stateless 64-bit mixer (splitmix64 finalizer). Used both for seed
/// derivation and for counter-based per-channel trial draws.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derive a child stream key from a parent key and up to three indices.
/// The derivation is order-sensitive, so (tag, pop, run) triples map to
/// distinct, reproducible streams under any execution schedule.
inline std::uint64_t derive_stream(std::uint64_t key, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(key);
  h = mix64(h ^ mix64(a ^ 0x8BADF00D00000001ull));
  h = mix64(h ^ mix64(b ^ 0x8BADF00D00000002ull));
  h = mix64(h ^ mix64(c ^ 0x8BADF00D00000003ull));
  return h;
}

/// Map 64 random bits to a double in [0, 1).
inline double bits_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Stream tags for ensemble seed derivation.
inline constexpr std::uint64_t kStreamNetwork = 0x6E657477ull;   // population graphs
inline constexpr std::uint64_t kStreamInitial = 0x696E6974ull;   // seed / USG draws
inline constexpr std::uint64_t kStreamRun = 0x72756E21ull;       // per-run trials
inline constexpr std::uint64_t kStreamGridPoint = 0x67726964ull; // sweep points

/// Sequential generator: mt19937_64 engine with hand-rolled bounded/unit
/// draws so results are identical across standard libraries (the standard
/// pins the engine but not the distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return bits_to_unit(engine_()); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Counter-based source of per-channel uniforms: the draw for (iteration,
/// channel) depends only on the run key, so simulations with coupled
/// randomness (e.g. two USG sets on one network) share channel outcomes,
/// and the result is independent of traversal order.
class TrialSource {
 public:
  explicit TrialSource(std::uint64_t run_key) : run_key_(run_key) {}

  double at(std::uint64_t iteration, std::uint64_t channel) const {
    return bits_to_unit(derive_stream(run_key_, iteration, channel));
  }

  std::uint64_t key() const { return run_key_; }

 private:
  std::uint64_t run_key_;
};

}  // namespace rumor
