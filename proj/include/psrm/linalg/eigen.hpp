#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "psrm/linalg/dense_matrix.hpp"

namespace psrm::linalg {

struct SymmetricEigen {
  std::vector<double> eigenvalues;           // ascending
  std::optional<DenseMatrix> eigenvectors;   // column i pairs with eigenvalues[i]
};

struct SymmetricEigenOptions {
  bool want_vectors = true;
  // Total implicit QL iterations allowed, as a multiple of n.
  std::size_t sweeps_per_row = 30;
};

// Householder tridiagonalization followed by implicit-shift QL with
// Wilkinson shifts. The input is symmetrized as (A + A^t)/2.
SymmetricEigen sym_eigen(const DenseMatrix& a, const SymmetricEigenOptions& opts = {});

// Quasi-upper-triangular T with orthogonal Z such that H = Z T Z^t.
// 1x1 diagonal blocks hold real eigenvalues, 2x2 blocks hold conjugate pairs;
// every 2x2 block left in T has complex roots.
struct SchurForm {
  DenseMatrix t;
  std::optional<DenseMatrix> z;
  // block_start[i] is true where a diagonal block begins.
  std::vector<bool> block_start;
};

struct SchurOptions {
  bool accumulate = true;
  std::size_t iterations_per_row = 40;
};

// Hessenberg reduction then Francis double-shift QR. No balancing so that
// Z stays orthogonal.
SchurForm real_schur(const DenseMatrix& h, const SchurOptions& opts = {});

// Reads the spectrum off a Schur form by block type.
Spectrum spectrum_from_schur(const SchurForm& form);

struct GeneralEigenOptions {
  bool balance = true;
  std::size_t iterations_per_row = 40;
};

// Eigenvalues of a general real matrix. Values only; the reduction works
// on the active window and the real/complex split follows the deflated
// block structure.
Spectrum general_eigen(const DenseMatrix& h, const GeneralEigenOptions& opts = {});

}  // namespace psrm::linalg
