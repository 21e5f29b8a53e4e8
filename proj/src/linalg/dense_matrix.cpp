#include "psrm/linalg/dense_matrix.hpp"

#include <cmath>
#include <string>

#include "psrm/error.hpp"

namespace psrm::linalg {

namespace {

void require_same_dim(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                    " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n_ * n_) {
    throw Error(ErrorCode::dimension_mismatch,
                "DenseMatrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                    std::to_string(a_.size()));
  }
  for (double v : a_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::invalid_argument, "DenseMatrix: non-finite entry");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> entries) {
  DenseMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) {
      throw Error(ErrorCode::invalid_argument, "DenseMatrix::diagonal: non-finite entry");
    }
    m(i, i) = entries[i];
  }
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const noexcept {
  // Scaled accumulation so that huge or tiny entries do not overflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : a_) {
    if (v == 0.0) continue;
    const double av = std::abs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double DenseMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool DenseMatrix::is_symmetric(double tol) const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= other.a_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
  for (double& v : a_) v *= s;
  return *this;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b, "operator*");
  const std::size_t n = a.dim();
  DenseMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

double frobenius_residual(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b, "frobenius_residual");
  return (a - b).frobenius_norm();
}

}  // namespace psrm::linalg
