#pragma once

#include <cstddef>
#include <vector>

#include "psrm/ensemble/rng.hpp"

namespace psrm::analytic {

// kappa = l^2 + l^4, gamma = E((kappa - 2) / kappa).
// kappa > 0 always; the elliptic parameter is < 1 and vanishes iff |l| = 1.
struct TwoByTwoParams {
  double lambda;
  double kappa;
  double gamma;

  static TwoByTwoParams from_lambda(double lambda);
};

// Eigenvalues of the 2x2 Q_1(l) = [[l a22, l^2 a12], [a12, l a11]].
struct TwoByTwoEigen {
  double e1;       // l (a11 + a22 - r) / 2
  double e2;       // l (a11 + a22 + r) / 2
  double spacing;  // |e2 - e1| = |l| r, r = sqrt(4 a12^2 + (a11 - a22)^2)
};
TwoByTwoEigen eig2x2_q1(double a11, double a12, double a22, double lambda);

// Joint density of the ordered pair e1 <= e2:
//   A' (e2 - e1) I0((kappa - 2)(e2 - e1)^2 / 16)
//      exp(-(kappa + 2)(e2 - e1)^2 / 16 - (e1 + e2)^2 / 4)
// and zero for e1 > e2. A' comes from jpdf_normalizer.
double jpdf_2x2(double e1, double e2, double lambda);

// A', from a 2-D quadrature over the half plane e1 <= e2. Cached per lambda;
// safe to call concurrently.
double jpdf_normalizer(double lambda);

// Unit-mean spacing law of the 2x2 Q_1(l) ensemble:
//   p(s) = (sqrt(2 kappa) / pi) gamma^2 s exp(-(kappa + 2) s^2 gamma^2 / (4 pi))
//          I0((kappa - 2) s^2 gamma^2 / (4 pi))
// Reduces to the Wigner surmise at |l| = 1. Throws for s < 0 or l = 0.
double spacing_2x2(double s, double lambda);
double spacing_2x2_cdf(double s, double lambda);

// Monte-Carlo sampling conventions for (a11, a12, a22).
enum class TwoByTwoWeight {
  // exp(-tr(Q Q^t) / 2): var(a11) = var(a22) = 1/l^2, var(a12) = 1/(1 + l^4).
  trace_weight,
  // Same law as the n x n ensembles: var(a11) = var(a22) = 2, var(a12) = 1.
  doubled_diagonal,
};

// Spacings of `count` random 2x2 Q_1(l) matrices, rescaled to unit sample mean.
std::vector<double> sample_q1_2x2_spacings(double lambda, std::size_t count,
                                           TwoByTwoWeight weight, ensemble::RngStream& rng);

}  // namespace psrm::analytic
