#pragma once

#include <cstdint>
#include <random>

namespace psrm::ensemble {

// Deterministic random stream keyed by (seed, stream_index). One stream per
// matrix sample keeps parallel generation independent of scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  // Uniform on the open interval (0, 1), 53 random bits.
  double uniform01();
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian();
  // Uniform on [lo, hi].
  double uniform(double lo, double hi);

  // Number of gaussian() / uniform() variates handed out so far.
  std::uint64_t variates() const noexcept { return variates_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
  std::uint64_t variates_ = 0;
};

RngStream make_rng(std::uint64_t seed, std::uint64_t stream_index);

}  // namespace psrm::ensemble
