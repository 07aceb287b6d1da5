#pragma once

#include <cstdint>
#include <limits>

namespace antag {

/// Counter-based random stream.
///
/// A stream is identified by a 64-bit key derived from (master seed, matrix
/// index, entry index); the n-th output is the SplitMix64 finalizer applied to
/// key + n * golden-gamma. Any entry of any matrix can therefore be generated
/// independently of every other, which makes sampling order-independent and
/// reproducible under any thread schedule.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  /// Stream for one entry of one matrix in an experiment.
  static Stream for_entry(std::uint64_t seed, std::uint64_t matrix, std::uint64_t entry) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Derives a child seed, e.g. one seed per figure panel.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

// Distribution helpers are written out so that streams are bit-reproducible
// across standard libraries (std::*_distribution algorithms are unspecified).

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Stream& s) noexcept;
/// Uniform on the open interval (0, 1).
double uniform_open01(Stream& s) noexcept;
double uniform(Stream& s, double a, double b) noexcept;
/// Standard normal by Box-Muller; consumes two outputs, returns one variate.
double standard_normal(Stream& s) noexcept;
/// +1 or -1 with probability 1/2.
double random_sign(Stream& s) noexcept;

}  // namespace antag
