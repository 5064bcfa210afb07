#pragma once

#include <cstdint>
#include <random>

namespace maxinf {

// Stream identifiers derived from the master seed. Every consumer of
// randomness owns one stream so that runs are reproducible end to end.
enum class StreamPurpose : std::uint32_t {
  kSketch = 1,          // hypergraph construction, index = repetition
  kDegreeSample = 2,    // degree-proportional draw, index = checkpoint or 0
  kEstimate = 3,        // Monte-Carlo influence estimation
  kGenerator = 4,       // random graph generation
  kBench = 5,           // per-trial master seeds in the bench harness
  kSketchWorker = 6,    // parallel sketch shards, index = (repetition << 16) | worker
};

constexpr std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t index = 0) {
  return (static_cast<std::uint64_t>(purpose) << 48) ^ index;
}

// A single-consumer random stream keyed by (seed, stream_id). Identical keys
// yield identical sequences.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), bound > 0. Lemire's multiply-and-reject, exact.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  // Bernoulli(p). Degenerate coins (p <= 0 or p >= 1) do not consume randomness.
  bool coin(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace maxinf
