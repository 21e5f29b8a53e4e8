#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "psrm/error.hpp"
#include "psrm/stats/spectral_stats.hpp"

namespace psrm::stats {

double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error(ErrorCode::domain, "ks_distance: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());

  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double below = static_cast<double>(i) / n;  // F_n(x-)
    const double upto = static_cast<double>(j) / n;   // F_n(x)
    const double left = cdf(std::nextafter(x[i], -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(upto - cdf(x[i])), std::abs(below - left)});
    i = j;
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::domain, "ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

}  // namespace psrm::stats
