#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace psrm::linalg {

// Square real matrix stored row-major. Entries are finite on construction.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n);
  DenseMatrix(std::size_t n, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> entries);

  std::size_t dim() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  std::span<const double> data() const noexcept { return a_; }
  std::span<double> data() noexcept { return a_; }

  DenseMatrix transposed() const;
  double frobenius_norm() const noexcept;
  double trace() const noexcept;
  bool is_symmetric(double tol = 0.0) const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s) noexcept;

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
  friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

// ||A - B||_F. Throws on dimension mismatch.
double frobenius_residual(const DenseMatrix& a, const DenseMatrix& b);

// Eigenvalues of a real matrix split by type. Real values ascending; each
// complex-conjugate pair stored once as (re, im) with im > 0.
struct Spectrum {
  std::vector<double> real_eigs;
  std::vector<std::complex<double>> complex_pairs;

  std::size_t dim() const noexcept { return real_eigs.size() + 2 * complex_pairs.size(); }
  bool all_real() const noexcept { return complex_pairs.empty(); }
};

}  // namespace psrm::linalg
