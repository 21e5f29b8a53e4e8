#include "psrm/family/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psrm/error.hpp"
#include "psrm/linalg/eigen.hpp"

namespace psrm::family {

namespace {

bool generalized(FamilyKind kind) { return kind == FamilyKind::GQ || kind == FamilyKind::GR; }
bool q_like(FamilyKind kind) { return kind == FamilyKind::Q || kind == FamilyKind::GQ; }

void require_even(std::size_t n, const char* where) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::invalid_argument,
                std::string(where) + ": n must be even and >= 2, got " + std::to_string(n));
  }
}

void require_parameter(double v, const char* name) {
  if (v == 0.0 || !std::isfinite(v)) {
    throw Error(ErrorCode::invalid_argument,
                std::string(name) + " must be finite and nonzero");
  }
}

void require_dim(const FamilySpec& spec, const DenseMatrix& m, const char* where) {
  if (m.dim() != spec.n) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(where) + ": matrix dimension " + std::to_string(m.dim()) +
                    " does not match spec n=" + std::to_string(spec.n));
  }
}

double sign(double v) { return v > 0 ? 1.0 : -1.0; }

std::vector<double> two_block_diagonal(std::size_t n, double top, double bottom) {
  std::vector<double> d(n);
  const std::size_t h = n / 2;
  std::fill(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(h), top);
  std::fill(d.begin() + static_cast<std::ptrdiff_t>(h), d.end(), bottom);
  return d;
}

// Real monomial stand-in for S_k(l) in similarity transforms. For k = 2,
// S_2^-1 X S_2 = (S F_1)^-1 X (S F_1) with S = diag(I, -I), so the phase
// never needs to be carried.
DenseMatrix real_block_transform(int k, double lambda, std::size_t n) {
  const std::size_t h = n / 2;
  DenseMatrix t(n);
  for (std::size_t i = 0; i < h; ++i) {
    switch (k) {
      case 1:
        t(i, h + i) = lambda;
        t(h + i, i) = 1.0;
        break;
      case 2:
        t(i, h + i) = lambda;
        t(h + i, i) = -1.0;
        break;
      default:
        t(i, i) = lambda;
        t(h + i, h + i) = -1.0;
        break;
    }
  }
  return t;
}

DenseMatrix real_block_transform_inverse(int k, double lambda, std::size_t n) {
  const std::size_t h = n / 2;
  DenseMatrix t(n);
  for (std::size_t i = 0; i < h; ++i) {
    switch (k) {
      case 1:
        t(i, h + i) = 1.0;
        t(h + i, i) = 1.0 / lambda;
        break;
      case 2:
        t(i, h + i) = -1.0;
        t(h + i, i) = 1.0 / lambda;
        break;
      default:
        t(i, i) = 1.0 / lambda;
        t(h + i, h + i) = -1.0;
        break;
    }
  }
  return t;
}

// Diagonal of S_k(m) S_k(l) (Q/GQ) or S_k(m)^-1 S_k(l) (R/GR), top block then
// bottom block.
std::pair<double, double> similarity_square(const FamilySpec& spec) {
  if (q_like(spec.kind)) return {spec.mu, spec.lambda};
  if (spec.k == 3) return {spec.lambda / spec.mu, 1.0};
  return {1.0, spec.lambda / spec.mu};
}

DenseMatrix scale_rows_cols(const DenseMatrix& m, const std::vector<double>& s) {
  DenseMatrix out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = s[i] * m(i, j) * s[j];
  return out;
}

std::vector<double> root_abs_scaling(const FamilySpec& spec) {
  const auto [top, bottom] = similarity_square(spec);
  return two_block_diagonal(spec.n, std::sqrt(std::abs(top)), std::sqrt(std::abs(bottom)));
}

}  // namespace

void validate(const FamilySpec& spec) {
  require_even(spec.n, "family");
  require_parameter(spec.lambda, "lambda");
  require_parameter(spec.mu, "mu");
  const int kmax = q_like(spec.kind) ? 2 : 3;
  if (spec.k < 1 || spec.k > kmax) {
    throw Error(ErrorCode::invalid_argument,
                "invalid family/k combination: k=" + std::to_string(spec.k) +
                    (q_like(spec.kind) ? " (Q families take k in {1,2})"
                                       : " (R families take k in {1,2,3})"));
  }
  if (!generalized(spec.kind) && spec.mu != spec.lambda) {
    throw Error(ErrorCode::invalid_argument, "Q and R families require mu == lambda");
  }
}

FamilySpec make_spec(FamilyKind kind, int k, double lambda, double mu, std::size_t n) {
  FamilySpec spec{kind, k, lambda, generalized(kind) ? mu : lambda, n};
  validate(spec);
  return spec;
}

FamilyId parse_family(std::string_view name) {
  FamilyKind kind;
  std::string_view rest;
  if (name.starts_with("gq")) {
    kind = FamilyKind::GQ;
    rest = name.substr(2);
  } else if (name.starts_with("gr")) {
    kind = FamilyKind::GR;
    rest = name.substr(2);
  } else if (name.starts_with("q")) {
    kind = FamilyKind::Q;
    rest = name.substr(1);
  } else if (name.starts_with("r")) {
    kind = FamilyKind::R;
    rest = name.substr(1);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown family '" + std::string(name) + "'");
  }
  if (rest.size() != 1 || rest[0] < '1' || rest[0] > '3') {
    throw Error(ErrorCode::invalid_argument, "unknown family '" + std::string(name) + "'");
  }
  const int k = rest[0] - '0';
  if (q_like(kind) && k == 3) {
    throw Error(ErrorCode::invalid_argument,
                "invalid family/k combination '" + std::string(name) +
                    "': S_3 M S_3 is symmetric, so no Q_3 family exists");
  }
  return {kind, k};
}

std::string family_name(FamilyKind kind, int k) {
  const char* prefix = kind == FamilyKind::Q    ? "q"
                       : kind == FamilyKind::R  ? "r"
                       : kind == FamilyKind::GQ ? "gq"
                                                : "gr";
  return prefix + std::to_string(k);
}

std::vector<FamilyId> all_families() {
  return {{FamilyKind::Q, 1},  {FamilyKind::Q, 2},  {FamilyKind::R, 1},  {FamilyKind::R, 2},
          {FamilyKind::R, 3},  {FamilyKind::GQ, 1}, {FamilyKind::GQ, 2}, {FamilyKind::GR, 1},
          {FamilyKind::GR, 2}, {FamilyKind::GR, 3}};
}

ComplexMatrix sigma_matrix(const BlockScaling& b) {
  require_even(b.n, "sigma_matrix");
  require_parameter(b.lambda, "lambda");
  if (b.k < 1 || b.k > 3) {
    throw Error(ErrorCode::invalid_argument, "sigma_matrix: k must be 1, 2 or 3");
  }
  const std::size_t h = b.n / 2;
  ComplexMatrix s{DenseMatrix(b.n), DenseMatrix(b.n)};
  for (std::size_t i = 0; i < h; ++i) {
    switch (b.k) {
      case 1:
        s.re(i, h + i) = b.lambda;
        s.re(h + i, i) = 1.0;
        break;
      case 2:
        s.im(i, h + i) = -b.lambda;
        s.im(h + i, i) = 1.0;
        break;
      default:
        s.re(i, i) = b.lambda;
        s.re(h + i, h + i) = -1.0;
        break;
    }
  }
  return s;
}

DenseMatrix construct(const FamilySpec& spec, const DenseMatrix& m) {
  validate(spec);
  require_dim(spec, m, "construct");
  const std::size_t n = spec.n;
  const std::size_t h = n / 2;
  const double l = spec.lambda;
  const double mu = spec.mu;

  // M = [[A, B], [B^t, C]]
  auto A = [&](std::size_t i, std::size_t j) { return m(i, j); };
  auto B = [&](std::size_t i, std::size_t j) { return m(i, h + j); };
  auto Bt = [&](std::size_t i, std::size_t j) { return m(j, h + i); };
  auto C = [&](std::size_t i, std::size_t j) { return m(h + i, h + j); };

  DenseMatrix out(n);
  const double flip = spec.k == 2 ? -1.0 : 1.0;

  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      double tl, tr, bl, br;
      if (q_like(spec.kind)) {
        // [[l C, +-l m B^t], [+-B, m A]]
        tl = l * C(i, j);
        tr = flip * l * mu * Bt(i, j);
        bl = flip * B(i, j);
        br = mu * A(i, j);
      } else if (spec.k == 3) {
        // [[(l/m) A, -l B], [-(1/m) B^t, C]]
        tl = (l / mu) * A(i, j);
        tr = -l * B(i, j);
        bl = -Bt(i, j) / mu;
        br = C(i, j);
      } else {
        // [[(l/m) C, +-l B^t], [+-(1/m) B, A]]
        tl = (l / mu) * C(i, j);
        tr = flip * l * Bt(i, j);
        bl = flip * B(i, j) / mu;
        br = A(i, j);
      }
      out(i, j) = tl;
      out(i, h + j) = tr;
      out(h + i, j) = bl;
      out(h + i, h + j) = br;
    }
  }
  return out;
}

Metric metric_eta(const FamilySpec& spec) {
  validate(spec);
  if (q_like(spec.kind)) {
    return {two_block_diagonal(spec.n, 1.0 / spec.lambda, spec.mu), MetricRole::similarity};
  }
  return {two_block_diagonal(spec.n, 1.0 / (spec.lambda * spec.mu), 1.0),
          MetricRole::similarity};
}

Metric metric_zeta(const FamilySpec& spec) {
  validate(spec);
  const double p = std::abs(spec.lambda * spec.mu);
  if (q_like(spec.kind)) {
    return {two_block_diagonal(spec.n, 1.0, p), MetricRole::orthogonality};
  }
  return {two_block_diagonal(spec.n, 1.0 / p, 1.0), MetricRole::orthogonality};
}

double spectrum_sign(const FamilySpec& spec) {
  validate(spec);
  // GR similarity squares are (1, l/m) or (l/m, 1): positive whenever l m > 0.
  return q_like(spec.kind) ? sign(spec.mu) : 1.0;
}

DenseMatrix associated_symmetric(const FamilySpec& spec, const DenseMatrix& m) {
  validate(spec);
  require_dim(spec, m, "associated_symmetric");
  if (!spec.real_regime()) {
    throw Error(ErrorCode::domain,
                "associated_symmetric: lambda * mu < 0 has no real symmetric similar matrix");
  }
  return scale_rows_cols(m, root_abs_scaling(spec));
}

DenseMatrix diagonalizer(const FamilySpec& spec, const DenseMatrix& d) {
  validate(spec);
  require_dim(spec, d, "diagonalizer");
  const std::vector<double> root = root_abs_scaling(spec);
  const std::size_t n = spec.n;

  if (q_like(spec.kind)) {
    // H = sgn * T^-1 J (J M J) J^-1 T with T the transform at mu, so
    // Dcal = G^-1 D G for G = J^-1 T.
    const DenseMatrix t = real_block_transform(spec.k, spec.mu, n);
    const DenseMatrix t_inv = real_block_transform_inverse(spec.k, spec.mu, n);
    DenseMatrix jdj(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) jdj(i, j) = root[i] * d(i, j) / root[j];
    return t_inv * jdj * t;
  }
  // H = U K^-1 (K M K) K U^-1 with U the transform at lambda, so
  // Dcal = G D G^-1 for G = U K^-1.
  const int k = spec.k;
  const DenseMatrix u = real_block_transform(k, spec.lambda, n);
  const DenseMatrix u_inv = real_block_transform_inverse(k, spec.lambda, n);
  DenseMatrix kdk(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) kdk(i, j) = d(i, j) * root[j] / root[i];
  return u * kdk * u_inv;
}

Spectrum fastpath_spectrum(const FamilySpec& spec, const DenseMatrix& m) {
  validate(spec);
  require_dim(spec, m, "fastpath_spectrum");
  if (!spec.real_regime()) {
    throw Error(ErrorCode::domain,
                "fastpath_spectrum: lambda * mu < 0, use the general eigensolver");
  }
  const linalg::SymmetricEigenOptions values_only{.want_vectors = false};
  Spectrum s;

  switch (spec.kind) {
    case FamilyKind::Q: {
      s.real_eigs = linalg::sym_eigen(m, values_only).eigenvalues;
      for (double& v : s.real_eigs) v *= spec.lambda;
      if (spec.lambda < 0) std::reverse(s.real_eigs.begin(), s.real_eigs.end());
      return s;
    }
    case FamilyKind::R:
      s.real_eigs = linalg::sym_eigen(m, values_only).eigenvalues;
      return s;
    case FamilyKind::GQ:
    case FamilyKind::GR: {
      const double sg = spectrum_sign(spec);
      s.real_eigs = linalg::sym_eigen(associated_symmetric(spec, m), values_only).eigenvalues;
      if (sg < 0) {
        for (double& v : s.real_eigs) v = -v;
        std::reverse(s.real_eigs.begin(), s.real_eigs.end());
      }
      return s;
    }
  }
  return s;
}

}  // namespace psrm::family
