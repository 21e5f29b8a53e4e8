// Acceptance runner. One line per criterion:
//   criterion N: PASS|FAIL  <measurements>
// Usage: psrm_acceptance [N ...]   (no arguments runs all of 1..11)
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "psrm/analytic/curves.hpp"
#include "psrm/analytic/special_functions.hpp"
#include "psrm/analytic/two_by_two.hpp"
#include "psrm/ensemble/rng.hpp"
#include "psrm/ensemble/sampling.hpp"
#include "psrm/family/family.hpp"
#include "psrm/linalg/eigen.hpp"
#include "psrm/pipeline/pipeline.hpp"
#include "psrm/stats/spectral_stats.hpp"
#include "psrm/verify/verify.hpp"

using namespace psrm;
using linalg::DenseMatrix;

namespace {

// ---- pinned tolerances and sizes ----
constexpr double kPsTol = 1e-12;         // pseudo-symmetry, relative to ||H||_F
constexpr double kPoTol = 1e-10;         // pseudo-orthogonality, relative to ||zeta||_F
constexpr double kFastPathTol = 1e-8;    // relative to max |eigenvalue|
constexpr double kKsWignerMax = 0.05;    // criteria 4 and 11
constexpr double kDensitySupMax = 0.05;  // criterion 5
constexpr double kLambdaKsMax = 0.02;    // criterion 6
constexpr double kPointwiseTol = 1e-12;  // criterion 7, p(s, 1) vs surmise
constexpr double kMomentTol = 1e-6;      // criterion 7, normalization and mean
constexpr double kMcSupMax = 0.02;       // criterion 8, histogram vs curve
constexpr double kCurveKsMin = 0.005;    // criterion 8, lambda = 0.9 curve vs surmise
constexpr double kBrokenKsMin = 0.1;     // criterion 9
constexpr double kSpecialTol = 1e-11;    // criterion 10, relative

constexpr double kRuntime1 = 60.0;
constexpr double kRuntime2 = 120.0;
constexpr double kRuntime4 = 300.0;
constexpr double kRuntime8 = 60.0;

const double kGrid[] = {-2.0, -0.9, -0.5, 0.5, 0.9, 2.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

DenseMatrix sample(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
  ensemble::RngStream rng(seed, stream);
  return ensemble::sample_symmetric(n, {}, rng);
}

// (lambda, mu) for instance i of a family, cycling through the grid.
std::pair<double, double> grid_point(const family::FamilyId& id, std::size_t i, int sign) {
  const bool single = id.kind == family::FamilyKind::Q || id.kind == family::FamilyKind::R;
  for (std::size_t k = i;; ++k) {
    const double l = kGrid[k % 6];
    const double mu = single ? l : kGrid[(k / 6) % 6];
    if (sign == 0 || (l * mu > 0) == (sign > 0)) return {l, mu};
  }
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const std::size_t sizes[] = {2, 4, 8, 50};
  double worst_ps = 0.0, worst_po = 0.0;
  std::size_t runs = 0, failures = 0;
  for (const auto id : family::all_families()) {
    for (std::size_t i = 0; i < 500; ++i) {
      const auto [l, mu] = grid_point(id, i, 0);
      const auto spec = family::make_spec(id.kind, id.k, l, mu, sizes[i % 4]);
      const DenseMatrix m = sample(101, runs, spec.n);
      const DenseMatrix h = family::construct(spec, m);
      const auto ps = verify::check_pseudo_symmetry(h, family::metric_eta(spec), kPsTol);
      const DenseMatrix base = spec.real_regime() ? family::associated_symmetric(spec, m) : m;
      const DenseMatrix d = *linalg::sym_eigen(base).eigenvectors;
      const auto po = verify::check_pseudo_orthogonality(family::diagonalizer(spec, d),
                                                         family::metric_zeta(spec), kPoTol);
      worst_ps = std::max(worst_ps, ps.residual / ps.scale);
      worst_po = std::max(worst_po, po.residual / po.scale);
      failures += !ps.passed + !po.passed;
      ++runs;
    }
  }
  return {failures == 0, fmt("instances=%zu worst_ps=%.2e (tol %.0e) worst_po=%.2e (tol %.0e) failures=%zu",
                             runs, worst_ps, kPsTol, worst_po, kPoTol, failures)};
}

Outcome criterion2() {
  std::size_t pairs_in_real = 0;
  bool broken_ok = true;
  std::string broken;
  std::uint64_t stream = 0;
  for (const auto id : family::all_families()) {
    for (std::size_t i = 0; i < 1000; ++i) {
      const auto [l, mu] = grid_point(id, i, +1);
      const auto spec = family::make_spec(id.kind, id.k, l, mu, 50);
      const auto s = linalg::general_eigen(family::construct(spec, sample(202, stream++, 50)));
      pairs_in_real += s.complex_pairs.size();
    }
    if (id.kind == family::FamilyKind::Q || id.kind == family::FamilyKind::R) continue;
    std::size_t with_pairs = 0, n_real = 0, n_all = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const auto [l, mu] = grid_point(id, i, -1);
      const auto spec = family::make_spec(id.kind, id.k, l, mu, 50);
      const auto s = linalg::general_eigen(family::construct(spec, sample(203, stream++, 50)));
      with_pairs += !s.complex_pairs.empty();
      n_real += s.real_eigs.size();
      n_all += s.dim();
    }
    const double frac = static_cast<double>(n_real) / static_cast<double>(n_all);
    broken_ok = broken_ok && with_pairs > 0 && frac > 0.0 && frac < 1.0;
    broken += fmt(" %s:%.3f", family::family_name(id.kind, id.k).c_str(), frac);
  }
  return {pairs_in_real == 0 && broken_ok,
          fmt("pairs_when_lambda_mu>0=%zu reality_fraction_when_lambda_mu<0:", pairs_in_real) + broken};
}

Outcome criterion3() {
  const std::size_t sizes[] = {2, 4, 8, 16, 32, 50};
  double worst = 0.0;
  std::size_t i = 0;
  const auto families = family::all_families();
  for (; i < 200; ++i) {
    const auto& id = families[i % families.size()];
    const auto [l, mu] = grid_point(id, i / families.size(), +1);
    const auto spec = family::make_spec(id.kind, id.k, l, mu, sizes[i % 6]);
    const DenseMatrix m = sample(303, i, spec.n);
    const auto fast = family::fastpath_spectrum(spec, m);
    const auto full = linalg::general_eigen(family::construct(spec, m));
    double scale = 0.0;
    for (double v : fast.real_eigs) scale = std::max(scale, std::abs(v));
    double dev = 0.0;
    if (full.real_eigs.size() != fast.real_eigs.size()) {
      dev = INFINITY;
    } else {
      for (std::size_t k = 0; k < fast.real_eigs.size(); ++k)
        dev = std::max(dev, std::abs(fast.real_eigs[k] - full.real_eigs[k]));
    }
    worst = std::max(worst, dev / scale);
  }
  return {worst <= kFastPathTol, fmt("instances=%zu worst_relative=%.2e (tol %.0e)", i, worst, kFastPathTol)};
}

pipeline::RunConfig desk_config(const std::string& family, double l, double mu, std::uint64_t seed,
                                ensemble::PdfKind pdf = ensemble::PdfKind::gaussian) {
  pipeline::RunConfig c;
  c.family = family;
  c.lambda = l;
  c.mu = mu;
  c.n = 100;
  c.count = 500;
  c.seed = seed;
  c.pdf = pdf;
  c.threads = pipeline::default_threads();
  c.normalize();
  return c;
}

Outcome nlsd_vs_wigner(ensemble::PdfKind pdf) {
  const auto desk = pipeline::compute_stats(pipeline::generate_ensemble(desk_config("q1", 0.9, 0.9, 404, pdf)));
  pipeline::RunConfig full = desk_config("q1", 0.9, 0.9, 405, pdf);
  full.n = 200;
  full.count = 1000;
  const auto big = pipeline::compute_stats(pipeline::generate_ensemble(full));
  return {desk.ks_wigner <= kKsWignerMax && big.ks_wigner <= kKsWignerMax,
          fmt("ks_wigner desk(500x100)=%.4f full(1000x200)=%.4f (max %.2f) ks_poisson desk=%.3f",
              desk.ks_wigner, big.ks_wigner, kKsWignerMax, desk.ks_poisson)};
}

Outcome criterion4() { return nlsd_vs_wigner(ensemble::PdfKind::gaussian); }

Outcome criterion5() {
  const auto s = pipeline::compute_stats(pipeline::generate_ensemble(desk_config("q1", 0.9, 0.9, 404)));
  // 30 equal bins on [-1.2, 1.2]; the 20 central ones tile [-0.8, 0.8].
  const auto h = stats::make_histogram(s.rescaled_levels, 30, -1.2, 1.2);
  const double dev = stats::max_bin_deviation(h, analytic::semicircle_cdf, -0.8, 0.8);
  return {dev <= kDensitySupMax,
          fmt("sup_bin_deviation=%.4f over 20 bins on [-0.8, 0.8] (max %.2f) levels=%zu", dev,
              kDensitySupMax, s.rescaled_levels.size())};
}

Outcome criterion6() {
  const auto a = pipeline::compute_stats(pipeline::generate_ensemble(desk_config("q1", 0.5, 0.5, 606)));
  const auto b = pipeline::compute_stats(pipeline::generate_ensemble(desk_config("q1", 2.0, 2.0, 607)));
  const double d = stats::ks_two_sample(a.spacings, b.spacings);
  return {d <= kLambdaKsMax, fmt("ks(Q1(0.5), Q1(2.0))=%.4f (max %.2f) spacings=%zu/%zu", d,
                                 kLambdaKsMax, a.spacings.size(), b.spacings.size())};
}

// Composite Simpson, independent of the library quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

Outcome criterion7() {
  double pointwise = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double s = 5.0 * i / 500.0;
    const double w = M_PI / 2 * s * std::exp(-M_PI * s * s / 4);
    pointwise = std::max(pointwise, std::abs(analytic::spacing_2x2(s, 1.0) - w));
  }
  double moments = 0.0;
  std::string per;
  for (double l : {0.5, 0.9, 2.0}) {
    auto p = [l](double s) { return analytic::spacing_2x2(s, l); };
    const double m0 = simpson(p, 0.0, 20.0, 20000);
    const double m1 = simpson([&](double s) { return s * p(s); }, 0.0, 20.0, 20000);
    moments = std::max({moments, std::abs(m0 - 1.0), std::abs(m1 - 1.0)});
    per += fmt(" l=%.1f:(%.10f, %.10f)", l, m0, m1);
  }
  return {pointwise <= kPointwiseTol && moments <= kMomentTol,
          fmt("max|p(s,1)-wigner|=%.1e (tol %.0e) max moment error=%.1e (tol %.0e)", pointwise,
              kPointwiseTol, moments, kMomentTol) + per};
}

Outcome criterion8() {
  ensemble::RngStream rng(808, 0);
  const auto s = analytic::sample_q1_2x2_spacings(0.9, 1000000, analytic::TwoByTwoWeight::trace_weight, rng);
  const auto h = stats::make_histogram(s, 80, 0.0, 4.0);
  const double sup = stats::max_bin_deviation(h, [](double x) { return analytic::spacing_2x2_cdf(x, 0.9); }, 0.0, 4.0);
  double curve_ks = 0.0;
  for (int i = 0; i <= 8000; ++i) {
    const double x = i * 1e-3;
    curve_ks = std::max(curve_ks, std::abs(analytic::spacing_2x2_cdf(x, 0.9) - analytic::wigner_cdf(x)));
  }
  return {sup <= kMcSupMax && curve_ks > kCurveKsMin,
          fmt("mc_vs_curve sup=%.4f (max %.2f, 80 bins) curve_ks(0.9 vs wigner)=%.4f (need > %.3f)",
              sup, kMcSupMax, curve_ks, kCurveKsMin)};
}

Outcome criterion9() {
  const auto s = pipeline::compute_stats(pipeline::generate_ensemble(desk_config("gq1", 1.0, -1.0, 909)));
  return {std::isfinite(s.ks_wigner) && s.ks_wigner >= kBrokenKsMin,
          fmt("ks_wigner=%.4f (min %.1f) reality_fraction=%.3f matrices_used=%zu skipped=%zu",
              s.ks_wigner, kBrokenKsMin, s.reality_fraction, s.matrices_used, s.matrices_skipped)};
}

Outcome criterion10() {
  auto trap = [](const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + h * i);
    return s * h;
  };
  double worst_i0 = 0.0, worst_e = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = -60.0 + 120.0 * i / 99.0;
    // (1/pi) int_0^pi exp(x cos t) dt, periodic so the trapezoid rule is spectral.
    const double ref = trap([x](double t) { return std::exp(x * std::cos(t)); }, 0.0, M_PI, 4000) / M_PI;
    worst_i0 = std::max(worst_i0, std::abs(analytic::bessel_i0(x) - ref) / ref);
    const double m = -20.0 + 20.99 * i / 99.0;  // [-20, 0.99]
    const double eref =
        trap([m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); }, 0.0, M_PI / 2, 8000);
    worst_e = std::max(worst_e, std::abs(analytic::elliptic_e(m) - eref) / eref);
  }
  return {worst_i0 <= kSpecialTol && worst_e <= kSpecialTol,
          fmt("I0 on [-60, 60]: %.1e, E(m) on [-20, 0.99]: %.1e (tol %.0e)", worst_i0, worst_e,
              kSpecialTol)};
}

Outcome criterion11() { return nlsd_vs_wigner(ensemble::PdfKind::uniform); }

struct Criterion {
  int id;
  Outcome (*run)();
  double runtime_limit;  // seconds, 0 = none
};

const Criterion kCriteria[] = {
    {1, criterion1, kRuntime1},  {2, criterion2, kRuntime2}, {3, criterion3, 0},
    {4, criterion4, kRuntime4},  {5, criterion5, 0},         {6, criterion6, 0},
    {7, criterion7, 0},          {8, criterion8, kRuntime8}, {9, criterion9, 0},
    {10, criterion10, 0},        {11, criterion11, 0},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.runtime_limit > 0 && secs > c.runtime_limit) {
      o.pass = false;
      o.detail += fmt(" runtime over %.0fs", c.runtime_limit);
    }
    std::printf("criterion %d: %s  %s [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
