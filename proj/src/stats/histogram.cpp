#include <algorithm>
#include <cmath>
#include <string>

#include "psrm/error.hpp"
#include "psrm/stats/spectral_stats.hpp"

namespace psrm::stats {

Histogram make_histogram(std::span<const double> data, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw Error(ErrorCode::invalid_argument, "make_histogram: bins must be >= 1");
  if (!(lo < hi)) throw Error(ErrorCode::invalid_argument, "make_histogram: need lo < hi");
  if (data.empty()) throw Error(ErrorCode::domain, "make_histogram: empty data");

  Histogram h;
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
  h.bin_edges.back() = hi;
  h.counts.assign(bins, 0);

  for (double v : data) {
    if (!(v >= lo && v <= hi)) {
      ++h.n_out_of_range;
      continue;
    }
    auto idx = static_cast<std::size_t>((v - lo) / width);
    idx = std::min(idx, bins - 1);
    ++h.counts[idx];
    ++h.n_samples;
  }
  h.renormalize();
  return h;
}

void Histogram::renormalize() {
  densities.assign(counts.size(), 0.0);
  if (n_samples == 0) return;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double w = bin_edges[i + 1] - bin_edges[i];
    densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(n_samples) * w);
  }
}

void Histogram::merge(const Histogram& other) {
  if (other.bin_edges != bin_edges) {
    throw Error(ErrorCode::invalid_argument, "Histogram::merge: bin edges differ");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  n_samples += other.n_samples;
  n_out_of_range += other.n_out_of_range;
  renormalize();
}

double max_bin_deviation(const Histogram& h, const std::function<double(double)>& cdf, double lo,
                         double hi) {
  double worst = 0.0;
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    const double a = h.bin_lo(i);
    const double b = h.bin_hi(i);
    if (a < lo - slack || b > hi + slack) continue;
    const double expected = (cdf(b) - cdf(a)) / (b - a);
    worst = std::max(worst, std::abs(h.densities[i] - expected));
  }
  return worst;
}

}  // namespace psrm::stats
