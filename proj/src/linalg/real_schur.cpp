#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "psrm/error.hpp"
#include "psrm/linalg/eigen.hpp"

namespace psrm::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Diagonal similarity by powers of two so that row and column norms are
// comparable. Eigenvalues are unchanged; Schur vectors would not be.
void balance(DenseMatrix& a) {
  const std::size_t n = a.dim();
  constexpr double radix = 2.0;
  constexpr double sqr = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqr;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqr;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Orthogonal reduction to upper Hessenberg form by Householder reflections.
// Entries below the subdiagonal are zeroed on return.
void hessenberg(DenseMatrix& h, DenseMatrix* v) {
  const std::size_t n = h.dim();
  if (n < 3) {
    if (v != nullptr) *v = DenseMatrix::identity(n);
    return;
  }
  const std::size_t high = n - 1;
  std::vector<double> ort(n, 0.0);

  for (std::size_t m = 1; m < high; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i <= high; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;

    double hh = 0.0;
    for (std::size_t i = high + 1; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;

    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = high + 1; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i <= high; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i <= high; ++i) {
      double f = 0.0;
      for (std::size_t j = high + 1; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j <= high; ++j) h(i, j) -= f * ort[j];
    }
    ort[m] *= scale;
    h(m, m - 1) = scale * g;
  }

  if (v != nullptr) {
    DenseMatrix& vv = *v;
    vv = DenseMatrix::identity(n);
    for (std::size_t m = high - 1; m >= 1; --m) {
      if (h(m, m - 1) != 0.0) {
        for (std::size_t i = m + 1; i <= high; ++i) ort[i] = h(i, m - 1);
        for (std::size_t j = m; j <= high; ++j) {
          double g = 0.0;
          for (std::size_t i = m; i <= high; ++i) g += ort[i] * vv(i, j);
          g = (g / ort[m]) / h(m, m - 1);
          for (std::size_t i = m; i <= high; ++i) vv(i, j) += g * ort[i];
        }
      }
      if (m == 1) break;
    }
  }

  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) h(i, j) = 0.0;
}

struct QrResult {
  std::vector<double> re;
  std::vector<double> im;
  std::vector<bool> block_start;
};

// Francis double-shift QR on an upper Hessenberg matrix. With `full` set the
// transformations are applied to whole rows and columns so that h ends as
// the Schur factor T; otherwise only the active window is updated.
QrResult francis_qr(DenseMatrix& h, DenseMatrix* v, bool full, std::size_t max_iterations) {
  const std::size_t nn = h.dim();
  QrResult out;
  out.re.assign(nn, 0.0);
  out.im.assign(nn, 0.0);
  out.block_start.assign(nn, false);

  double norm = 0.0;
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < nn; ++j) norm += std::abs(h(i, j));

  // Signed index arithmetic mirrors the textbook loop structure.
  long n = static_cast<long>(nn) - 1;
  const long low = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;
  std::size_t iter = 0;
  std::size_t total = 0;

  auto H = [&](long i, long j) -> double& {
    return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  while (n >= low) {
    long l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) <= kEps * s) break;
      --l;
    }

    if (l == n) {
      H(n, n) += exshift;
      out.re[n] = H(n, n);
      out.im[n] = 0.0;
      out.block_start[n] = true;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      H(n, n) += exshift;
      H(n - 1, n - 1) += exshift;
      x = H(n, n);

      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        out.re[n - 1] = x + z;
        out.re[n] = out.re[n - 1];
        if (z != 0.0) out.re[n] = x - w / z;
        out.im[n - 1] = 0.0;
        out.im[n] = 0.0;
        out.block_start[n - 1] = true;
        out.block_start[n] = true;

        if (full) {
          x = H(n, n - 1);
          s = std::abs(x) + std::abs(z);
          p = x / s;
          q = z / s;
          r = std::sqrt(p * p + q * q);
          p /= r;
          q /= r;
          for (long j = n - 1; j < static_cast<long>(nn); ++j) {
            z = H(n - 1, j);
            H(n - 1, j) = q * z + p * H(n, j);
            H(n, j) = q * H(n, j) - p * z;
          }
          for (long i = 0; i <= n; ++i) {
            z = H(i, n - 1);
            H(i, n - 1) = q * z + p * H(i, n);
            H(i, n) = q * H(i, n) - p * z;
          }
          if (v != nullptr) {
            for (std::size_t i = 0; i < nn; ++i) {
              z = (*v)(i, n - 1);
              (*v)(i, n - 1) = q * z + p * (*v)(i, n);
              (*v)(i, n) = q * (*v)(i, n) - p * z;
            }
          }
          H(n, n - 1) = 0.0;
        }
      } else {
        out.re[n - 1] = x + p;
        out.re[n] = x + p;
        out.im[n - 1] = z;
        out.im[n] = -z;
        out.block_start[n - 1] = true;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total > max_iterations) {
        throw Error(ErrorCode::no_convergence,
                    "general_eigen: Francis QR did not converge within " +
                        std::to_string(max_iterations) + " iterations");
      }
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }

      // Exceptional shifts break cycles on stubborn blocks.
      if (iter == 10) {
        exshift += x;
        for (long i = low; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (long i = low; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      long m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) +
                                   std::abs(H(m + 1, m + 1))))) {
          break;
        }
        --m;
      }

      for (long i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      const long row_end = full ? static_cast<long>(nn) - 1 : n;
      const long col_begin = full ? 0 : l;

      for (long k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;

        if (k != m) {
          H(k, k - 1) = -s * x;
        } else if (l != m) {
          H(k, k - 1) = -H(k, k - 1);
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;

        for (long j = k; j <= row_end; ++j) {
          p = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            p += r * H(k + 2, j);
            H(k + 2, j) -= p * z;
          }
          H(k, j) -= p * x;
          H(k + 1, j) -= p * y;
        }
        const long col_end = std::min(n, k + 3);
        for (long i = col_begin; i <= col_end; ++i) {
          p = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            p += z * H(i, k + 2);
            H(i, k + 2) -= p * r;
          }
          H(i, k) -= p;
          H(i, k + 1) -= p * q;
        }
        if (v != nullptr) {
          DenseMatrix& vv = *v;
          for (std::size_t i = 0; i < nn; ++i) {
            const auto kk = static_cast<std::size_t>(k);
            p = x * vv(i, kk) + y * vv(i, kk + 1);
            if (notlast) {
              p += z * vv(i, kk + 2);
              vv(i, kk + 2) -= p * r;
            }
            vv(i, kk) -= p;
            vv(i, kk + 1) -= p * q;
          }
        }
      }
    }
  }
  return out;
}

Spectrum collect(const QrResult& qr) {
  Spectrum s;
  for (std::size_t i = 0; i < qr.re.size(); ++i) {
    if (qr.im[i] == 0.0) {
      s.real_eigs.push_back(qr.re[i]);
    } else if (qr.im[i] > 0.0) {
      s.complex_pairs.emplace_back(qr.re[i], qr.im[i]);
    }
  }
  std::stable_sort(s.real_eigs.begin(), s.real_eigs.end());
  std::stable_sort(s.complex_pairs.begin(), s.complex_pairs.end(), [](auto a, auto b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return s;
}

}  // namespace

SchurForm real_schur(const DenseMatrix& h, const SchurOptions& opts) {
  const std::size_t n = h.dim();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "real_schur: empty matrix");

  SchurForm form;
  form.t = h;
  DenseMatrix z;
  hessenberg(form.t, opts.accumulate ? &z : nullptr);
  const QrResult qr =
      francis_qr(form.t, opts.accumulate ? &z : nullptr, true, opts.iterations_per_row * n);

  // Everything outside the diagonal blocks is exactly zero in T.
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < i; ++j) form.t(i, j) = 0.0;
    if (qr.block_start[i]) form.t(i, i - 1) = 0.0;
  }
  form.block_start = qr.block_start;
  if (opts.accumulate) form.z = std::move(z);
  return form;
}

Spectrum spectrum_from_schur(const SchurForm& form) {
  const DenseMatrix& t = form.t;
  const std::size_t n = t.dim();
  Spectrum s;
  std::size_t i = 0;
  while (i < n) {
    const bool two_by_two = i + 1 < n && !form.block_start[i + 1];
    if (!two_by_two) {
      s.real_eigs.push_back(t(i, i));
      ++i;
      continue;
    }
    const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
    const double half_tr = 0.5 * (a + d);
    const double p = 0.5 * (a - d);
    const double disc = p * p + b * c;  // negative for a complex block
    s.complex_pairs.emplace_back(half_tr, std::sqrt(std::abs(disc)));
    i += 2;
  }
  std::stable_sort(s.real_eigs.begin(), s.real_eigs.end());
  std::stable_sort(s.complex_pairs.begin(), s.complex_pairs.end(), [](auto x, auto y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return s;
}

Spectrum general_eigen(const DenseMatrix& h, const GeneralEigenOptions& opts) {
  const std::size_t n = h.dim();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "general_eigen: empty matrix");
  DenseMatrix work = h;
  if (opts.balance) balance(work);
  hessenberg(work, nullptr);
  return collect(francis_qr(work, nullptr, false, opts.iterations_per_row * n));
}

}  // namespace psrm::linalg
