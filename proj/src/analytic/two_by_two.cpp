#include "psrm/analytic/two_by_two.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "psrm/analytic/special_functions.hpp"
#include "psrm/error.hpp"

namespace psrm::analytic {

using std::numbers::pi;

namespace {

void require_lambda(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) {
    throw Error(ErrorCode::invalid_argument, "lambda must be finite and nonzero");
  }
}

// S exp(-alpha S^2) I0(beta S^2), overflow-free.
double radial_weight(double s, double alpha, double beta) {
  const double b = std::abs(beta) * s * s;
  return s * bessel_i0_scaled(b) * std::exp(b - alpha * s * s);
}

}  // namespace

TwoByTwoParams TwoByTwoParams::from_lambda(double lambda) {
  require_lambda(lambda);
  const double l2 = lambda * lambda;
  const double kappa = l2 + l2 * l2;
  return {lambda, kappa, elliptic_e((kappa - 2.0) / kappa)};
}

TwoByTwoEigen eig2x2_q1(double a11, double a12, double a22, double lambda) {
  const double r = std::hypot(2.0 * a12, a11 - a22);
  const double t = a11 + a22;
  return {lambda * (t - r) / 2.0, lambda * (t + r) / 2.0, std::abs(lambda) * r};
}

double jpdf_normalizer(double lambda) {
  require_lambda(lambda);
  static std::mutex mutex;
  static std::map<double, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(lambda); it != cache.end()) return it->second;
  }

  const TwoByTwoParams p = TwoByTwoParams::from_lambda(lambda);
  const double alpha = (p.kappa + 2.0) / 16.0;
  const double beta = (p.kappa - 2.0) / 16.0;
  // Integrand decays like exp(-(alpha - |beta|) S^2) and exp(-T^2 / 4);
  // truncate where both are below 1e-20.
  const double decay = alpha - std::abs(beta);
  const double s_max = std::sqrt(46.0 / decay);
  const double t_max = std::sqrt(4.0 * 46.0);

  // dE1 dE2 = dS dT / 2 with S = e2 - e1 >= 0, T = e1 + e2.
  const double mass = integrate(
      [&](double s) {
        const double radial = radial_weight(s, alpha, beta);
        const double inner =
            integrate([](double t) { return std::exp(-0.25 * t * t); }, -t_max, t_max, 1e-14);
        return 0.5 * radial * inner;
      },
      0.0, s_max, 1e-14);
  const double value = 1.0 / mass;

  std::lock_guard lock(mutex);
  cache.emplace(lambda, value);
  return value;
}

double jpdf_2x2(double e1, double e2, double lambda) {
  require_lambda(lambda);
  if (e1 > e2) return 0.0;
  const TwoByTwoParams p = TwoByTwoParams::from_lambda(lambda);
  const double s = e2 - e1;
  const double t = e1 + e2;
  const double alpha = (p.kappa + 2.0) / 16.0;
  const double beta = (p.kappa - 2.0) / 16.0;
  return jpdf_normalizer(lambda) * radial_weight(s, alpha, beta) * std::exp(-0.25 * t * t);
}

double spacing_2x2(double s, double lambda) {
  if (s < 0 || std::isnan(s)) throw Error(ErrorCode::domain, "spacing_2x2: s must be >= 0");
  const TwoByTwoParams p = TwoByTwoParams::from_lambda(lambda);
  const double g2 = p.gamma * p.gamma;
  const double x = s * s * g2 / (4.0 * pi);
  const double b = std::abs(p.kappa - 2.0) * x;
  return std::sqrt(2.0 * p.kappa) / pi * g2 * s * bessel_i0_scaled(b) *
         std::exp(b - (p.kappa + 2.0) * x);
}

double spacing_2x2_cdf(double s, double lambda) {
  if (s <= 0) return 0.0;
  require_lambda(lambda);
  return integrate([lambda](double x) { return spacing_2x2(x, lambda); }, 0.0, s, 1e-14);
}

std::vector<double> sample_q1_2x2_spacings(double lambda, std::size_t count,
                                           TwoByTwoWeight weight, ensemble::RngStream& rng) {
  require_lambda(lambda);
  if (count == 0) throw Error(ErrorCode::invalid_argument, "sample_q1_2x2_spacings: count 0");
  double sd_diag, sd_off;
  if (weight == TwoByTwoWeight::trace_weight) {
    sd_diag = 1.0 / std::abs(lambda);
    sd_off = 1.0 / std::sqrt(1.0 + std::pow(lambda, 4));
  } else {
    sd_diag = std::numbers::sqrt2;
    sd_off = 1.0;
  }
  std::vector<double> s(count);
  for (double& v : s) {
    const double a11 = sd_diag * rng.gaussian();
    const double a12 = sd_off * rng.gaussian();
    const double a22 = sd_diag * rng.gaussian();
    v = eig2x2_q1(a11, a12, a22, lambda).spacing;
  }
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(count);
  for (double& v : s) v /= mean;
  return s;
}

}  // namespace psrm::analytic
