#pragma once

// Seeded substreams and a deterministic parallel batch runner. Batch
// boundaries depend only on (samples, batch size), and batch results are
// combined in index order, so estimates are bit-identical regardless of how
// many worker threads run.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace hypgauge {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream seed from a base seed and stream tags.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
  std::uint64_t s = seed;
  std::uint64_t z = splitmix64(s);
  s ^= z + 0x632be59bd9b4e019ULL * (tag_a + 1);
  z = splitmix64(s);
  s ^= z + 0x9e3779b97f4a7c15ULL * (tag_b + 1);
  return splitmix64(s);
}

/// mt19937_64 wrapped with implementation-independent double conversion.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  double angle() { return kTwoPiLocal * u01() - kPiLocal; }
  std::uint64_t bits() { return eng_(); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return std::min<std::size_t>(n - 1, static_cast<std::size_t>(u01() * static_cast<double>(n)));
  }

 private:
  static constexpr double kPiLocal = 3.14159265358979323846;
  static constexpr double kTwoPiLocal = 2.0 * kPiLocal;
  std::mt19937_64 eng_;
};

inline constexpr long kBatchSize = 8192;

inline int worker_count() {
  if (const char* s = std::getenv("HYPGAUGE_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(batch_index, batch_count, rng) over ceil(total / kBatchSize)
/// batches and returns the per-batch accumulators in batch order.
template <class Acc, class Fn>
std::vector<Acc> run_batches(long total, std::uint64_t seed, std::uint64_t stream_tag, Fn&& fn) {
  const long nbatch = (total + kBatchSize - 1) / kBatchSize;
  std::vector<Acc> out(static_cast<std::size_t>(nbatch));
  const int workers = std::min<long>(worker_count(), nbatch) > 0
                          ? static_cast<int>(std::min<long>(worker_count(), nbatch))
                          : 1;
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long b = next.fetch_add(1);
      if (b >= nbatch) break;
      const long count = std::min<long>(kBatchSize, total - b * kBatchSize);
      Rng rng(substream(seed, stream_tag, static_cast<std::uint64_t>(b)));
      out[static_cast<std::size_t>(b)] = fn(b, count, rng);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace hypgauge
