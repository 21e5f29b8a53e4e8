#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "psrm/error.hpp"
#include "psrm/linalg/eigen.hpp"

namespace psrm::linalg {

namespace {

// Householder reduction of the symmetric matrix held in v to tridiagonal
// form. On return d holds the diagonal, e the subdiagonal in e[1..n-1], and
// v the accumulated orthogonal transform when accumulate is set.
void tridiagonalize(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e,
                    bool accumulate) {
  const std::size_t n = v.dim();
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);

    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!accumulate) {
    for (std::size_t j = 0; j < n; ++j) d[j] = v(j, j);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e), shifting with the eigenvalue of the
// leading 2x2 closest to d[l] (Wilkinson).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, DenseMatrix* v,
                    std::size_t max_iterations) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0;
  double tst1 = 0.0;
  std::size_t iterations = 0;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      do {
        if (++iterations > max_iterations) {
          throw Error(ErrorCode::no_convergence,
                      "sym_eigen: implicit QL did not converge within " +
                          std::to_string(max_iterations) + " iterations");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (v != nullptr) {
            DenseMatrix& vv = *v;
            for (std::size_t k = 0; k < n; ++k) {
              h = vv(k, ii + 1);
              vv(k, ii + 1) = s * vv(k, ii) + c * h;
              vv(k, ii) = c * vv(k, ii) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SymmetricEigen sym_eigen(const DenseMatrix& a, const SymmetricEigenOptions& opts) {
  const std::size_t n = a.dim();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "sym_eigen: empty matrix");

  DenseMatrix v(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = 0.5 * (a(i, j) + a(j, i));

  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e, opts.want_vectors);
  tridiagonal_ql(d, e, opts.want_vectors ? &v : nullptr, opts.sweeps_per_row * n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });

  SymmetricEigen out;
  out.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = d[order[i]];
  if (opts.want_vectors) {
    DenseMatrix sorted(n);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t k = 0; k < n; ++k) sorted(k, col) = v(k, order[col]);
    out.eigenvectors = std::move(sorted);
  }
  return out;
}

}  // namespace psrm::linalg
