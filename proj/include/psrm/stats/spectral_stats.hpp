#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace psrm::stats {

enum class UnfoldMethod { polynomial, semicircle };

UnfoldMethod parse_unfold_method(std::string_view name);
std::string_view to_string(UnfoldMethod method);

struct UnfoldConfig {
  UnfoldMethod method = UnfoldMethod::polynomial;
  int degree = 7;               // polynomial method only
  double trim_fraction = 0.02;  // dropped from each spectrum edge, in [0, 0.2]

  void validate() const;
};

// Maps one ascending spectrum to unit mean spacing.
//
// polynomial: least-squares fit of the staircase N(E_i) = i + 1/2 by a
// Chebyshev series of the given degree on the trimmed levels; evaluated at
// each retained level.
// semicircle: e_i = n F(eps_i) with F the integrated semicircle law and eps
// the spectrum rescaled to its own mean and radius 2 * stddev.
//
// Inverted neighbours after the map are dropped; more than 5% dropped means
// the fit is unusable and throws. The result is affinely rescaled so its
// mean spacing is exactly 1. Throws when fewer than degree + 2 levels
// survive trimming.
std::vector<double> unfold(std::span<const double> levels, const UnfoldConfig& cfg);

// Minimum number of levels a spectrum needs for unfold() to accept it.
std::size_t min_levels_for_unfold(const UnfoldConfig& cfg, std::size_t total_levels);

// One smooth staircase fitted to all spectra together (normalized per
// spectrum), then applied to each. Spacings across the whole ensemble have
// mean 1. Spectra with fewer than two levels inside the fitted range come
// back empty.
std::vector<std::vector<double>> unfold_pooled(const std::vector<std::vector<double>>& spectra,
                                               const UnfoldConfig& cfg);

// s_i = e_{i+1} - e_i.
std::vector<double> spacings(std::span<const double> unfolded);

// Pooled spacing sample; unit mean when built from unfolded spectra.
struct SpacingSample {
  std::vector<double> values;

  void append(std::span<const double> unfolded);
  double mean() const;
};

// (E - mean) / R with R = 2 * stddev, so a semicircle maps onto [-1, 1].
// Throws on an empty pool or zero variance.
std::vector<double> density_rescale(std::span<const double> all_eigs);

struct Histogram {
  std::vector<double> bin_edges;      // strictly increasing, bins + 1 values
  std::vector<std::size_t> counts;
  std::vector<double> densities;      // sum densities[i] * width[i] == 1
  std::size_t n_samples = 0;          // binned
  std::size_t n_out_of_range = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double bin_lo(std::size_t i) const { return bin_edges[i]; }
  double bin_hi(std::size_t i) const { return bin_edges[i + 1]; }

  // Bin-wise count addition; edges must match.
  void merge(const Histogram& other);
  void renormalize();
};

// Density-normalized histogram with equal-width bins over [lo, hi].
// Samples outside the range are counted in n_out_of_range, not binned.
Histogram make_histogram(std::span<const double> data, std::size_t bins, double lo, double hi);

// Largest |density - bin average of the reference| over bins lying inside
// [lo, hi]; the bin average is (cdf(hi) - cdf(lo)) / width.
double max_bin_deviation(const Histogram& h, const std::function<double(double)>& cdf,
                         double lo, double hi);

// sup_x |F_empirical(x) - cdf(x)|, both one-sided gaps at every sample
// point; ties and jumps in cdf are handled through left limits.
double ks_distance(std::span<const double> sample, const std::function<double(double)>& cdf);

// Two-sample statistic sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace psrm::stats
