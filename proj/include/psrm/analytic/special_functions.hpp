#pragma once

#include <functional>

namespace psrm::analytic {

// Modified Bessel function of the first kind, order 0. Power series for
// |x| <= 15, asymptotic expansion beyond. Throws a domain error for |x| > 700.
double bessel_i0(double x);

// exp(-|x|) I0(x); finite for every finite x.
double bessel_i0_scaled(double x);

// Complete elliptic integral of the second kind in the parameter convention,
// E(m) = int_0^{pi/2} sqrt(1 - m sin^2 t) dt, for m <= 1 (negative m allowed).
double elliptic_e(double m);

// Adaptive Gauss-Legendre quadrature of f over [a, b] to the requested
// relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

}  // namespace psrm::analytic
