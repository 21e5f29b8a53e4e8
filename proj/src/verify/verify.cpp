#include "psrm/verify/verify.hpp"

#include <cmath>

#include "psrm/error.hpp"

namespace psrm::verify {

using linalg::DenseMatrix;

namespace {

ResidualReport make_report(std::string name, double residual, double scale, double tol) {
  return {std::move(name), residual, scale, tol, residual <= tol * scale};
}

}  // namespace

ResidualReport check_pseudo_symmetry(const DenseMatrix& h, const family::Metric& eta,
                                     double tol) {
  const std::size_t n = h.dim();
  if (eta.dim() != n) {
    throw Error(ErrorCode::dimension_mismatch, "check_pseudo_symmetry: metric dimension");
  }
  for (double v : eta.diagonal) {
    if (v == 0.0 || !std::isfinite(v)) {
      throw Error(ErrorCode::invalid_argument, "check_pseudo_symmetry: singular metric");
    }
  }
  // eta diagonal: (eta H eta^-1)_ij = eta_i H_ij / eta_j
  DenseMatrix diff(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      diff(i, j) = eta.diagonal[i] * h(i, j) / eta.diagonal[j] - h(j, i);
  return make_report("pseudo_symmetry", diff.frobenius_norm(), h.frobenius_norm(), tol);
}

ResidualReport check_pseudo_orthogonality(const DenseMatrix& dcal, const family::Metric& zeta,
                                          double tol) {
  const std::size_t n = dcal.dim();
  if (zeta.dim() != n) {
    throw Error(ErrorCode::dimension_mismatch, "check_pseudo_orthogonality: metric dimension");
  }
  DenseMatrix zd(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) zd(i, j) = zeta.diagonal[i] * dcal(i, j);
  DenseMatrix lhs = dcal.transposed() * zd;
  for (std::size_t i = 0; i < n; ++i) lhs(i, i) -= zeta.diagonal[i];
  const DenseMatrix z = zeta.matrix();
  return make_report("pseudo_orthogonality", lhs.frobenius_norm(), z.frobenius_norm(), tol);
}

ResidualReport check_diagonalization(const DenseMatrix& h, const DenseMatrix& dcal, double tol) {
  const std::size_t n = h.dim();
  if (dcal.dim() != n) {
    throw Error(ErrorCode::dimension_mismatch, "check_diagonalization: dimension mismatch");
  }
  // Each column of Dcal must be an eigenvector: H d_j = e_j d_j with e_j the
  // Rayleigh-type quotient d_j^t H d_j / d_j^t d_j.
  const DenseMatrix hd = h * dcal;
  DenseMatrix diff(n);
  for (std::size_t j = 0; j < n; ++j) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += dcal(i, j) * hd(i, j);
      den += dcal(i, j) * dcal(i, j);
    }
    const double e = den > 0 ? num / den : 0.0;
    for (std::size_t i = 0; i < n; ++i) diff(i, j) = hd(i, j) - e * dcal(i, j);
  }
  return make_report("diagonalization", diff.frobenius_norm(),
                     h.frobenius_norm() * dcal.frobenius_norm(), tol);
}

RealityReport classify_reality(const linalg::Spectrum& s) {
  RealityReport r;
  r.n_real = s.real_eigs.size();
  r.n_pairs = s.complex_pairs.size();
  const std::size_t n = s.dim();
  r.fraction_real = n == 0 ? 0.0 : static_cast<double>(r.n_real) / static_cast<double>(n);
  return r;
}

}  // namespace psrm::verify
