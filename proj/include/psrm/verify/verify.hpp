#pragma once

#include <cstddef>
#include <string>

#include "psrm/family/family.hpp"
#include "psrm/linalg/dense_matrix.hpp"

namespace psrm::verify {

// Relative tolerances: rounding-only identities vs identities that involve
// a computed eigenbasis.
inline constexpr double kAlgebraicTolerance = 1e-12;
inline constexpr double kSolverTolerance = 1e-10;

// passed <=> residual <= tolerance * scale
struct ResidualReport {
  std::string check_name;
  double residual = 0.0;
  double scale = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct RealityReport {
  std::size_t n_real = 0;
  std::size_t n_pairs = 0;
  double fraction_real = 0.0;
};

// ||eta H eta^-1 - H^t||_F against scale ||H||_F. Throws on a singular eta.
ResidualReport check_pseudo_symmetry(const linalg::DenseMatrix& h, const family::Metric& eta,
                                     double tol = kAlgebraicTolerance);

// ||Dcal^t zeta Dcal - zeta||_F against scale ||zeta||_F.
ResidualReport check_pseudo_orthogonality(const linalg::DenseMatrix& dcal,
                                          const family::Metric& zeta,
                                          double tol = kSolverTolerance);

// Checks that every column of Dcal is an eigenvector of H:
// ||H Dcal - Dcal E||_F with E the per-column Rayleigh quotients, against
// scale ||H||_F ||Dcal||_F. Avoids forming Dcal^-1.
ResidualReport check_diagonalization(const linalg::DenseMatrix& h,
                                     const linalg::DenseMatrix& dcal,
                                     double tol = kSolverTolerance);

// Counts by block type; no tolerance is involved.
RealityReport classify_reality(const linalg::Spectrum& s);

}  // namespace psrm::verify
