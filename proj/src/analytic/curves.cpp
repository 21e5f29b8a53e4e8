#include "psrm/analytic/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "psrm/error.hpp"

namespace psrm::analytic {

using std::numbers::pi;

double wigner_surmise(double s) {
  if (s < 0 || std::isnan(s)) throw Error(ErrorCode::domain, "wigner_surmise: s must be >= 0");
  return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

double wigner_cdf(double s) { return s <= 0 ? 0.0 : -std::expm1(-0.25 * pi * s * s); }

double poisson_cdf(double s) { return s <= 0 ? 0.0 : -std::expm1(-s); }

double semicircle(double eps) {
  if (!(std::abs(eps) < 1.0)) return 0.0;
  return (2.0 / pi) * std::sqrt(1.0 - eps * eps);
}

double semicircle_cdf(double eps) {
  if (eps <= -1.0) return 0.0;
  if (eps >= 1.0) return 1.0;
  return std::clamp(0.5 + (eps * std::sqrt(1.0 - eps * eps) + std::asin(eps)) / pi, 0.0, 1.0);
}

}  // namespace psrm::analytic
