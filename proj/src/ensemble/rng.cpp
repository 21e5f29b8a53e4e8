#include "psrm/ensemble/rng.hpp"

#include <cmath>
#include <numbers>

namespace psrm::ensemble {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(stream_key(seed, stream_index)) {}

double RngStream::uniform01() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() {
  ++variates_;
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double RngStream::uniform(double lo, double hi) {
  ++variates_;
  return lo + (hi - lo) * uniform01();
}

RngStream make_rng(std::uint64_t seed, std::uint64_t stream_index) {
  return RngStream(seed, stream_index);
}

}  // namespace psrm::ensemble
