#include "psrm/analytic/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "psrm/error.hpp"

namespace psrm::analytic {

namespace {

constexpr double kSeriesLimit = 15.0;
constexpr double kOverflowLimit = 700.0;

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) for large x; stops at the smallest term.
double i0_asymptotic_factor(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (next > term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

constexpr int kGaussOrder = 10;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};
  std::array<double, kGaussOrder> weights{};
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre polynomial.
GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kGaussOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

double gauss(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& rule = gauss_rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double whole,
                double abs_tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss(f, a, mid);
  const double right = gauss(f, mid, b);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= abs_tol) return both;
  return adaptive(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
         adaptive(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // Coarse pass fixes the scale for the absolute tolerance.
  constexpr int kPanels = 8;
  double coarse = 0.0;
  double coarse_abs = 0.0;
  std::array<double, kPanels> panel{};
  const double h = (b - a) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    panel[i] = gauss(f, a + i * h, a + (i + 1) * h);
    coarse += panel[i];
    coarse_abs += std::abs(panel[i]);
  }
  const double abs_tol =
      std::max(rel_tol * coarse_abs, std::numeric_limits<double>::min()) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    total += adaptive(f, a + i * h, a + (i + 1) * h, panel[i], abs_tol, 40);
  }
  return total;
}

double bessel_i0(double x) {
  if (!std::isfinite(x) || std::abs(x) > kOverflowLimit) {
    throw Error(ErrorCode::domain, "bessel_i0: |x| must be <= 700");
  }
  const double ax = std::abs(x);
  if (ax <= kSeriesLimit) return i0_series(ax);
  return std::exp(ax) / std::sqrt(2.0 * std::numbers::pi * ax) * i0_asymptotic_factor(ax);
}

double bessel_i0_scaled(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::domain, "bessel_i0_scaled: non-finite x");
  const double ax = std::abs(x);
  if (ax <= kSeriesLimit) return std::exp(-ax) * i0_series(ax);
  return i0_asymptotic_factor(ax) / std::sqrt(2.0 * std::numbers::pi * ax);
}

double elliptic_e(double m) {
  if (!(m <= 1.0)) {
    throw Error(ErrorCode::domain, "elliptic_e: parameter m must be <= 1");
  }
  if (m == 1.0) return 1.0;
  if (m == 0.0) return std::numbers::pi / 2.0;
  return integrate(
      [m](double t) {
        const double s = std::sin(t);
        return std::sqrt(1.0 - m * s * s);
      },
      0.0, std::numbers::pi / 2.0, 1e-15);
}

}  // namespace psrm::analytic
