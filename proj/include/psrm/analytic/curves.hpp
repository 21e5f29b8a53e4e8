#pragma once

namespace psrm::analytic {

// p_W(s) = (pi/2) s exp(-pi s^2 / 4). Throws for s < 0.
double wigner_surmise(double s);
double wigner_cdf(double s);

// Poisson spacing law, for comparison: p(s) = exp(-s).
double poisson_cdf(double s);

// D(e) = (2/pi) sqrt(1 - e^2) on [-1, 1], zero outside.
double semicircle(double eps);
double semicircle_cdf(double eps);

}  // namespace psrm::analytic
