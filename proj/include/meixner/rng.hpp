// Keyed random streams and a deterministic chunked parallel loop.
#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace meixner {

std::uint64_t splitmix64(std::uint64_t& state);

// Stream (seed, index) drives a std::mt19937_64 whose state is filled from a
// SplitMix64 sequence keyed on both numbers. Same key, same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::mt19937_64& engine() { return eng_; }

  double normal() { return normal_(eng_); }
  double uniform() { return uniform_(eng_); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

// A fresh seed for retries, fixed function of (seed, salt).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Worker count: explicit value if > 0, else MEIXNER_THREADS, else hardware.
int resolve_threads(int requested);

// Calls fn(chunk, begin, end) for every chunk of [0, total). Chunk boundaries
// depend only on chunk_size, so results keyed by chunk are thread-count
// independent.
void for_each_chunk(long total, long chunk_size, int threads,
                    const std::function<void(long, long, long)>& fn);

}  // namespace meixner
