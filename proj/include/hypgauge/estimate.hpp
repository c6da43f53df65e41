#pragma once

#include <cmath>
#include <cstdint>

namespace hypgauge {

/// A Monte Carlo value with its standard error, or a deterministic value with
/// stderr 0. Identical (inputs, seed, samples) reproduce identical bits.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

/// Sample standard error from streaming sums.
inline double stderr_from_sums(double sum, double sum_sq, long n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double var = (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  if (var < 0) var = 0;
  return std::sqrt(var / static_cast<double>(n));
}

}  // namespace hypgauge
