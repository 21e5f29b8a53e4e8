#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "psrm/linalg/dense_matrix.hpp"

namespace psrm::family {

using linalg::DenseMatrix;
using linalg::Spectrum;

// Q_k(l)      = S_k(l) M S_k(l)          k = 1, 2
// R_k(l)      = S_k(l) M S_k(l)^-1       k = 1, 2, 3
// GQ_k(l, m)  = S_k(l) M S_k(m)          k = 1, 2
// GR_k(l, m)  = S_k(l) M S_k(m)^-1       k = 1, 2, 3
// where S_k are the block "Pauli" matrices built by sigma_matrix().
enum class FamilyKind { Q, R, GQ, GR };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Q;
  int k = 1;
  double lambda = 1.0;
  double mu = 1.0;  // equal to lambda for Q and R
  std::size_t n = 2;

  // lambda * mu > 0: spectrum entirely real. Otherwise real values mixed
  // with conjugate pairs.
  bool real_regime() const noexcept { return lambda * mu > 0.0; }
};

// Validates and normalizes (mu := lambda for Q/R). Throws psrm::Error.
FamilySpec make_spec(FamilyKind kind, int k, double lambda, double mu, std::size_t n);
void validate(const FamilySpec& spec);

// "q1", "r3", "gq2", "gr1", ...
struct FamilyId {
  FamilyKind kind;
  int k;
};
FamilyId parse_family(std::string_view name);
std::string family_name(FamilyKind kind, int k);
std::vector<FamilyId> all_families();

struct BlockScaling {
  int k = 1;
  double lambda = 1.0;
  std::size_t n = 2;
};

struct ComplexMatrix {
  DenseMatrix re;
  DenseMatrix im;
};

// S_1 = [[0, l I], [I, 0]], S_2 = [[0, -i l I], [i I, 0]], S_3 = [[l I, 0], [0, -I]]
// with n/2 x n/2 blocks. Only S_2 has an imaginary part.
ComplexMatrix sigma_matrix(const BlockScaling& b);

// Builds the family member from a symmetric M using real block formulas;
// no complex arithmetic is involved even for k = 2.
DenseMatrix construct(const FamilySpec& spec, const DenseMatrix& m);

enum class MetricRole { similarity, orthogonality };

// Constant diagonal metric.
struct Metric {
  std::vector<double> diagonal;
  MetricRole role = MetricRole::similarity;

  std::size_t dim() const noexcept { return diagonal.size(); }
  DenseMatrix matrix() const { return DenseMatrix::diagonal(diagonal); }
};

// eta with eta H eta^-1 = H^t:
//   Q, GQ: diag(I / l, m I)      R, GR: diag(I / (l m), I)
Metric metric_eta(const FamilySpec& spec);

// zeta with Dcal^t zeta Dcal = zeta for the diagonalizer below:
//   Q, GQ: diag(I, |l m| I)      R, GR: diag(I / |l m|, I)
Metric metric_zeta(const FamilySpec& spec);

// Real symmetric matrix similar (up to the sign from spectrum_sign) to the
// family member: J M J with J^2 = |S_k(m) S_k(l)| for Q/GQ, K M K with
// K^2 = S_k(m)^-1 S_k(l) for R/GR. Requires lambda * mu > 0.
DenseMatrix associated_symmetric(const FamilySpec& spec, const DenseMatrix& m);

// +1 or -1: eig(H) = spectrum_sign * eig(associated_symmetric).
double spectrum_sign(const FamilySpec& spec);

// Dcal = G^-1 D G (Q/GQ) or G D G^-1 (R/GR) for the family's monomial
// similarity G. Pseudo-orthogonal under metric_zeta for any orthogonal D.
// When D diagonalizes associated_symmetric (and lambda * mu > 0), Dcal
// diagonalizes H. For Q and R this D is simply the eigenbasis of M.
DenseMatrix diagonalizer(const FamilySpec& spec, const DenseMatrix& d);

// All-real spectrum from a symmetric eigensolve only:
//   Q -> l eig(M), R -> eig(M), GQ -> sgn(m) eig(J M J), GR -> eig(K M K).
// Throws a domain error when lambda * mu < 0.
Spectrum fastpath_spectrum(const FamilySpec& spec, const DenseMatrix& m);

}  // namespace psrm::family
