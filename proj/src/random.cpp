#include "antagonistic/random.hpp"

#include <cmath>
#include <numbers>

namespace antag {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed + kGamma) ^ (index * kGamma + 0x6a09e667f3bcc909ULL));
}

Stream Stream::for_entry(std::uint64_t seed, std::uint64_t matrix, std::uint64_t entry) noexcept {
  std::uint64_t k = mix64(seed + kGamma);
  k = mix64(k ^ (matrix + 0x3c6ef372fe94f82bULL));
  k = mix64(k ^ (entry + 0xa54ff53a5f1d36f1ULL));
  return Stream(k);
}

Stream::result_type Stream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double uniform01(Stream& s) noexcept {
  return static_cast<double>(s() >> 11) * 0x1.0p-53;
}

double uniform_open01(Stream& s) noexcept {
  return (static_cast<double>(s() >> 11) + 0.5) * 0x1.0p-53;
}

double uniform(Stream& s, double a, double b) noexcept {
  return a + (b - a) * uniform01(s);
}

double standard_normal(Stream& s) noexcept {
  const double u1 = uniform_open01(s);
  const double u2 = uniform01(s);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double random_sign(Stream& s) noexcept {
  return (s() >> 63) != 0 ? 1.0 : -1.0;
}

}  // namespace antag
