#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "psrm/analytic/curves.hpp"
#include "psrm/error.hpp"
#include "psrm/stats/spectral_stats.hpp"

namespace psrm::stats {

namespace {

constexpr double kMaxDroppedFraction = 0.05;

// Chebyshev series on [lo, hi].
struct ChebyshevFit {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> coeffs;

  double operator()(double e) const {
    const double x = hi > lo ? (2.0 * e - lo - hi) / (hi - lo) : 0.0;
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) {
      const double b0 = 2.0 * x * b1 - b2 + coeffs[k];
      b2 = b1;
      b1 = b0;
    }
    return x * b1 - b2 + coeffs[0];
  }
};

// Least squares through Householder QR on the Chebyshev design matrix.
ChebyshevFit fit_chebyshev(std::span<const double> e, std::span<const double> y, int degree) {
  const std::size_t m = e.size();
  const std::size_t p = static_cast<std::size_t>(degree) + 1;
  ChebyshevFit fit;
  fit.lo = e.front();
  fit.hi = e.back();

  // Column-major design matrix.
  std::vector<double> a(m * p);
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[j * m + i]; };
  for (std::size_t i = 0; i < m; ++i) {
    const double x = fit.hi > fit.lo ? (2.0 * e[i] - fit.lo - fit.hi) / (fit.hi - fit.lo) : 0.0;
    A(i, 0) = 1.0;
    if (p > 1) A(i, 1) = x;
    for (std::size_t j = 2; j < p; ++j) A(i, j) = 2.0 * x * A(i, j - 1) - A(i, j - 2);
  }
  std::vector<double> b(y.begin(), y.end());

  for (std::size_t j = 0; j < p; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm = std::hypot(norm, A(i, j));
    if (norm == 0.0) {
      throw Error(ErrorCode::domain, "unfold: degenerate levels, polynomial fit is singular");
    }
    const double alpha = A(j, j) > 0 ? -norm : norm;
    std::vector<double> v(m - j);
    for (std::size_t i = j; i < m; ++i) v[i - j] = A(i, j);
    v[0] -= alpha;
    const double vnorm2 = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = j; c < p; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += v[i - j] * A(i, c);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < m; ++i) A(i, c) -= f * v[i - j];
    }
    double dot = 0.0;
    for (std::size_t i = j; i < m; ++i) dot += v[i - j] * b[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = j; i < m; ++i) b[i] -= f * v[i - j];
  }

  fit.coeffs.assign(p, 0.0);
  for (std::size_t j = p; j-- > 0;) {
    double s = b[j];
    for (std::size_t c = j + 1; c < p; ++c) s -= A(j, c) * fit.coeffs[c];
    if (A(j, j) == 0.0) {
      throw Error(ErrorCode::domain, "unfold: rank-deficient polynomial fit");
    }
    fit.coeffs[j] = s / A(j, j);
  }
  return fit;
}

std::size_t trim_count(double fraction, std::size_t total) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(total)));
}

// Drops points that do not increase, then rescales to unit mean spacing.
std::vector<double> clean_and_normalize(std::vector<double> e, std::size_t input_count) {
  std::vector<double> kept;
  kept.reserve(e.size());
  for (double v : e) {
    if (kept.empty() || v > kept.back()) kept.push_back(v);
  }
  const std::size_t dropped = e.size() - kept.size();
  if (static_cast<double>(dropped) > kMaxDroppedFraction * static_cast<double>(input_count)) {
    throw Error(ErrorCode::domain, "unfold: non-monotone staircase fit (" +
                                       std::to_string(dropped) + " of " +
                                       std::to_string(input_count) +
                                       " levels inverted); lower the degree");
  }
  if (kept.size() < 2) {
    throw Error(ErrorCode::domain, "unfold: fewer than two levels after cleanup");
  }
  const double first = kept.front();
  const double span = kept.back() - first;
  const double scale = static_cast<double>(kept.size() - 1) / span;
  for (double& v : kept) v = first + (v - first) * scale;
  return kept;
}

void mean_and_radius(std::span<const double> x, double& mean, double& radius) {
  const double n = static_cast<double>(x.size());
  mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  radius = 2.0 * std::sqrt(ss / n);
}

}  // namespace

UnfoldMethod parse_unfold_method(std::string_view name) {
  if (name == "polynomial") return UnfoldMethod::polynomial;
  if (name == "semicircle") return UnfoldMethod::semicircle;
  throw Error(ErrorCode::invalid_argument, "unknown unfolding method '" + std::string(name) + "'");
}

std::string_view to_string(UnfoldMethod method) {
  return method == UnfoldMethod::polynomial ? "polynomial" : "semicircle";
}

void UnfoldConfig::validate() const {
  if (degree < 1) throw Error(ErrorCode::invalid_argument, "unfold: degree must be >= 1");
  if (!(trim_fraction >= 0.0 && trim_fraction <= 0.2)) {
    throw Error(ErrorCode::invalid_argument, "unfold: trim fraction must lie in [0, 0.2]");
  }
}

std::size_t min_levels_for_unfold(const UnfoldConfig& cfg, std::size_t total_levels) {
  const std::size_t need = cfg.method == UnfoldMethod::polynomial
                               ? static_cast<std::size_t>(cfg.degree) + 2
                               : std::size_t{2};
  return need + 2 * trim_count(cfg.trim_fraction, total_levels);
}

std::vector<double> unfold(std::span<const double> levels, const UnfoldConfig& cfg) {
  cfg.validate();
  const std::size_t total = levels.size();
  if (!std::is_sorted(levels.begin(), levels.end())) {
    throw Error(ErrorCode::invalid_argument, "unfold: levels must be sorted ascending");
  }
  const std::size_t cut = trim_count(cfg.trim_fraction, total);
  const std::size_t need = cfg.method == UnfoldMethod::polynomial
                               ? static_cast<std::size_t>(cfg.degree) + 2
                               : std::size_t{2};
  if (total < 2 * cut + need) {
    throw Error(ErrorCode::domain, "unfold: too few levels (" + std::to_string(total) +
                                       ") for the requested fit");
  }
  const std::span<const double> kept = levels.subspan(cut, total - 2 * cut);

  std::vector<double> e(kept.size());
  if (cfg.method == UnfoldMethod::polynomial) {
    std::vector<double> staircase(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      staircase[i] = static_cast<double>(cut + i) + 0.5;
    }
    const ChebyshevFit fit = fit_chebyshev(kept, staircase, cfg.degree);
    for (std::size_t i = 0; i < kept.size(); ++i) e[i] = fit(kept[i]);
  } else {
    double mean = 0.0, radius = 0.0;
    mean_and_radius(levels, mean, radius);
    if (radius == 0.0) throw Error(ErrorCode::domain, "unfold: zero-variance spectrum");
    for (std::size_t i = 0; i < kept.size(); ++i) {
      e[i] = static_cast<double>(total) * analytic::semicircle_cdf((kept[i] - mean) / radius);
    }
  }
  return clean_and_normalize(std::move(e), kept.size());
}

std::vector<std::vector<double>> unfold_pooled(const std::vector<std::vector<double>>& spectra,
                                               const UnfoldConfig& cfg) {
  cfg.validate();
  std::vector<double> pool;
  for (const auto& s : spectra) pool.insert(pool.end(), s.begin(), s.end());
  std::sort(pool.begin(), pool.end());
  const std::size_t total = pool.size();
  const std::size_t cut = trim_count(cfg.trim_fraction, total);
  const std::size_t need = cfg.method == UnfoldMethod::polynomial
                               ? static_cast<std::size_t>(cfg.degree) + 2
                               : std::size_t{2};
  if (spectra.empty() || total < 2 * cut + need) {
    throw Error(ErrorCode::domain, "unfold_pooled: too few levels in the ensemble");
  }
  const double count = static_cast<double>(spectra.size());
  const std::span<const double> kept(pool.data() + cut, total - 2 * cut);
  const double lo = kept.front();
  const double hi = kept.back();

  std::function<double(double)> staircase;
  ChebyshevFit fit;
  double mean = 0.0, radius = 0.0;
  if (cfg.method == UnfoldMethod::polynomial) {
    std::vector<double> y(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      y[i] = (static_cast<double>(cut + i) + 0.5) / count;
    }
    fit = fit_chebyshev(kept, y, cfg.degree);
    staircase = [&fit](double e) { return fit(e); };
  } else {
    mean_and_radius(pool, mean, radius);
    if (radius == 0.0) throw Error(ErrorCode::domain, "unfold_pooled: zero variance");
    const double per_spectrum = static_cast<double>(total) / count;
    staircase = [=](double e) {
      return per_spectrum * analytic::semicircle_cdf((e - mean) / radius);
    };
  }

  std::vector<std::vector<double>> out(spectra.size());
  double spacing_sum = 0.0;
  std::size_t spacing_count = 0;
  for (std::size_t k = 0; k < spectra.size(); ++k) {
    std::vector<double> e;
    for (double v : spectra[k]) {
      if (v < lo || v > hi) continue;
      const double u = staircase(v);
      if (e.empty() || u > e.back()) e.push_back(u);
    }
    if (e.size() < 2) continue;
    spacing_sum += e.back() - e.front();
    spacing_count += e.size() - 1;
    out[k] = std::move(e);
  }
  if (spacing_count == 0) throw Error(ErrorCode::domain, "unfold_pooled: no spacings");
  const double scale = static_cast<double>(spacing_count) / spacing_sum;
  for (auto& e : out)
    for (double& v : e) v *= scale;
  return out;
}

std::vector<double> spacings(std::span<const double> unfolded) {
  std::vector<double> s;
  if (unfolded.size() < 2) return s;
  s.reserve(unfolded.size() - 1);
  for (std::size_t i = 0; i + 1 < unfolded.size(); ++i) s.push_back(unfolded[i + 1] - unfolded[i]);
  return s;
}

void SpacingSample::append(std::span<const double> unfolded) {
  const std::vector<double> s = spacings(unfolded);
  values.insert(values.end(), s.begin(), s.end());
}

double SpacingSample::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::vector<double> density_rescale(std::span<const double> all_eigs) {
  if (all_eigs.empty()) throw Error(ErrorCode::domain, "density_rescale: empty pool");
  double mean = 0.0, radius = 0.0;
  mean_and_radius(all_eigs, mean, radius);
  if (radius == 0.0) throw Error(ErrorCode::domain, "density_rescale: zero variance");
  std::vector<double> eps(all_eigs.size());
  for (std::size_t i = 0; i < all_eigs.size(); ++i) eps[i] = (all_eigs[i] - mean) / radius;
  return eps;
}

}  // namespace psrm::stats
