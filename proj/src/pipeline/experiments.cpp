#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "psrm/analytic/curves.hpp"
#include "psrm/ensemble/rng.hpp"
#include "psrm/ensemble/sampling.hpp"
#include "psrm/error.hpp"
#include "psrm/linalg/eigen.hpp"
#include "psrm/pipeline/pipeline.hpp"
#include "psrm/verify/verify.hpp"

namespace psrm::pipeline {

using linalg::DenseMatrix;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative to the largest |eigenvalue|.
constexpr double kFastPathTolerance = 1e-8;

// Runs fn(i) for i in [0, count) over `threads` workers pulling indices
// from a shared counter. The first exception is rethrown after the join.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

DenseMatrix draw_m(const RunConfig& cfg, std::size_t index) {
  ensemble::RngStream rng(cfg.seed, index);
  return ensemble::sample_symmetric(cfg.n, cfg.element_pdf(), rng);
}

double ks_or_nan(const std::vector<double>& s, double (*cdf)(double)) {
  if (s.empty()) return kNaN;
  return stats::ks_distance(s, [cdf](double x) { return x < 0 ? 0.0 : cdf(x); });
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

SpectrumRecord compute_record(const RunConfig& cfg, std::size_t index) {
  SpectrumRecord r;
  r.index = index;
  try {
    const family::FamilySpec spec = cfg.spec();
    const DenseMatrix m = draw_m(cfg, index);
    if (spec.real_regime()) {
      r.spectrum = family::fastpath_spectrum(spec, m);
    } else {
      r.spectrum = linalg::general_eigen(family::construct(spec, m));
    }
  } catch (const Error& e) {
    r.ok = false;
    r.error = e.what();
    r.spectrum = {};
  }
  return r;
}

EnsembleResult generate_ensemble(const RunConfig& cfg) {
  EnsembleResult result;
  result.config = cfg;
  result.config.normalize();
  result.records.resize(result.config.count);
  const RunConfig& c = result.config;
  parallel_for(c.count, c.threads, [&](std::size_t i) { result.records[i] = compute_record(c, i); });
  return result;
}

StatsResult compute_stats(const EnsembleResult& ensemble) {
  return compute_stats(ensemble, ensemble.config);
}

StatsResult compute_stats(const EnsembleResult& ensemble, const RunConfig& cfg) {
  const stats::UnfoldConfig ucfg = cfg.unfold_config();
  StatsResult out;

  std::vector<const SpectrumRecord*> good;
  std::vector<double> pool;
  for (const SpectrumRecord& r : ensemble.records) {
    if (!r.ok) {
      ++out.matrices_failed;
      continue;
    }
    good.push_back(&r);
    out.n_real += r.spectrum.real_eigs.size();
    out.n_pairs += r.spectrum.complex_pairs.size();
    if (!r.spectrum.complex_pairs.empty()) ++out.matrices_with_pairs;
    pool.insert(pool.end(), r.spectrum.real_eigs.begin(), r.spectrum.real_eigs.end());
  }
  const std::size_t total = out.n_real + 2 * out.n_pairs;
  out.reality_fraction = total == 0 ? 0.0 : static_cast<double>(out.n_real) / total;

  // Unfolded per-matrix spectra; empty when the matrix is skipped.
  std::vector<std::vector<double>> unfolded(good.size());
  if (cfg.pooled_unfolding) {
    std::vector<std::vector<double>> levels;
    levels.reserve(good.size());
    for (const auto* r : good) levels.push_back(r->spectrum.real_eigs);
    if (!pool.empty()) {
      try {
        unfolded = stats::unfold_pooled(levels, ucfg);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::domain) throw;
      }
    }
  } else {
    parallel_for(good.size(), cfg.threads, [&](std::size_t i) {
      const auto& levels = good[i]->spectrum.real_eigs;
      if (levels.size() < stats::min_levels_for_unfold(ucfg, levels.size())) return;
      try {
        unfolded[i] = stats::unfold(levels, ucfg);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::domain) throw;
      }
    });
  }
  stats::SpacingSample sample;
  for (const auto& u : unfolded) {
    if (u.size() < 2) {
      ++out.matrices_skipped;
      continue;
    }
    ++out.matrices_used;
    sample.append(u);
  }
  out.spacings = std::move(sample.values);
  out.spacing_mean = out.spacings.empty() ? kNaN : stats::SpacingSample{out.spacings}.mean();

  const auto bins = cfg.bins;
  if (!out.spacings.empty()) {
    out.nlsd = stats::make_histogram(out.spacings, bins, 0.0, kNlsdRange);
  }
  out.ks_wigner = ks_or_nan(out.spacings, analytic::wigner_cdf);
  out.ks_poisson = ks_or_nan(out.spacings, analytic::poisson_cdf);

  if (pool.size() >= 2) {
    try {
      out.rescaled_levels = stats::density_rescale(pool);
      out.density = stats::make_histogram(out.rescaled_levels, bins, -kDensityRange, kDensityRange);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::domain) throw;
      out.rescaled_levels.clear();
    }
  }
  return out;
}

std::string StatsResult::summary_json(const RunConfig& cfg) const {
  json j = json::parse(cfg.header_line());
  j["observable"] = "summary";
  j["matrices"] = {{"used", matrices_used},
                   {"skipped", matrices_skipped},
                   {"failed", matrices_failed},
                   {"with_complex_pairs", matrices_with_pairs}};
  j["eigenvalues"] = {{"real", n_real}, {"complex_pairs", n_pairs}};
  j["reality_fraction"] = number(reality_fraction);
  j["spacings"] = {{"count", spacings.size()}, {"mean", number(spacing_mean)}};
  j["ks"] = {{"wigner", number(ks_wigner)}, {"poisson", number(ks_poisson)}};
  j["density"] = {{"samples", density.n_samples}, {"out_of_range", density.n_out_of_range}};
  j["nlsd"] = {{"samples", nlsd.n_samples}, {"out_of_range", nlsd.n_out_of_range}};
  return j.dump(2);
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckSummary& c) { return c.informational || c.failures == 0; });
}

std::string VerifyReport::to_json() const {
  json j = json::parse(config.header_line());
  j["observable"] = "verify";
  j["instances"] = instances;
  j["passed"] = passed();
  json checks_json = json::array();
  for (const CheckSummary& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"runs", c.runs},
                           {"failures", c.failures},
                           {"worst_relative_residual", number(c.worst)},
                           {"tolerance", c.tolerance},
                           {"informational", c.informational}});
  }
  j["checks"] = checks_json;
  j["reality"] = {{"real", n_real},
                  {"complex_pairs", n_pairs},
                  {"instances_with_pairs", instances_with_pairs},
                  {"fraction_real", number(reality_fraction)}};
  return j.dump(2);
}

VerifyReport run_verify(const RunConfig& cfg_in, const VerifyOptions& opts) {
  RunConfig cfg = cfg_in;
  cfg.normalize();
  const family::FamilySpec spec = cfg.spec();
  const bool real = spec.real_regime();
  const family::Metric eta = family::metric_eta(spec);
  const family::Metric zeta = family::metric_zeta(spec);

  struct Instance {
    verify::ResidualReport ps, po, diag;
    double fastpath = 0.0;
    bool fastpath_ok = true;
    verify::RealityReport reality;
    std::string error;
  };
  std::vector<Instance> results(cfg.count);

  parallel_for(cfg.count, cfg.threads, [&](std::size_t i) {
    Instance& inst = results[i];
    try {
      const DenseMatrix m = draw_m(cfg, i);
      DenseMatrix h = family::construct(spec, m);
      if (opts.inject_fault) h(0, cfg.n - 1) += opts.fault_size;
      inst.ps = verify::check_pseudo_symmetry(h, eta);

      // Any orthogonal D gives a pseudo-orthogonal Dcal; use the eigenbasis
      // that diagonalizes H when one exists.
      const DenseMatrix base = real ? family::associated_symmetric(spec, m) : m;
      const linalg::SymmetricEigen se = linalg::sym_eigen(base);
      const DenseMatrix dcal = family::diagonalizer(spec, *se.eigenvectors);
      inst.po = verify::check_pseudo_orthogonality(dcal, zeta);
      if (real) inst.diag = verify::check_diagonalization(h, dcal);

      const linalg::Spectrum general = linalg::general_eigen(h);
      inst.reality = verify::classify_reality(general);
      if (real) {
        const linalg::Spectrum fast = family::fastpath_spectrum(spec, m);
        // Pair real parts count twice; a tiny imaginary part is solver noise.
        std::vector<double> g = general.real_eigs;
        double worst_im = 0.0;
        for (const auto& z : general.complex_pairs) {
          g.push_back(z.real());
          g.push_back(z.real());
          worst_im = std::max(worst_im, std::abs(z.imag()));
        }
        std::sort(g.begin(), g.end());
        if (g.size() != fast.real_eigs.size()) {
          throw Error(ErrorCode::dimension_mismatch, "fast path and solver disagree on size");
        }
        double scale = 0.0, diff = worst_im;
        for (double v : fast.real_eigs) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < g.size(); ++k) {
          diff = std::max(diff, std::abs(g[k] - fast.real_eigs[k]));
        }
        inst.fastpath = scale > 0 ? diff / scale : diff;
        inst.fastpath_ok = inst.fastpath <= kFastPathTolerance;
      }
    } catch (const Error& e) {
      inst.error = e.what();
    }
  });

  VerifyReport report;
  report.config = cfg;
  report.instances = cfg.count;
  CheckSummary ps{"pseudo_symmetry", 0, 0, 0.0, verify::kAlgebraicTolerance, false};
  CheckSummary po{"pseudo_orthogonality", 0, 0, 0.0, verify::kSolverTolerance, false};
  CheckSummary dg{"diagonalization", 0, 0, 0.0, verify::kSolverTolerance, false};
  CheckSummary fp{"fastpath_vs_general", 0, 0, 0.0, kFastPathTolerance, false};
  // lambda * mu < 0 allows any mix, so the regime check only reports there.
  CheckSummary rr{"reality_regime", 0, 0, 0.0, 0.0, !real};
  CheckSummary errors{"solver_errors", 0, 0, 0.0, 0.0, false};

  auto add = [](CheckSummary& c, const verify::ResidualReport& r) {
    ++c.runs;
    if (!r.passed) ++c.failures;
    const double rel = r.scale > 0 ? r.residual / r.scale : r.residual;
    c.worst = std::max(c.worst, rel);
  };
  for (const Instance& inst : results) {
    ++errors.runs;
    if (!inst.error.empty()) {
      ++errors.failures;
      continue;
    }
    add(ps, inst.ps);
    add(po, inst.po);
    if (real) {
      add(dg, inst.diag);
      ++fp.runs;
      if (!inst.fastpath_ok) ++fp.failures;
      fp.worst = std::max(fp.worst, inst.fastpath);
    }
    ++rr.runs;
    report.n_real += inst.reality.n_real;
    report.n_pairs += inst.reality.n_pairs;
    if (inst.reality.n_pairs > 0) {
      ++report.instances_with_pairs;
      if (real) ++rr.failures;
    }
  }
  const std::size_t total = report.n_real + 2 * report.n_pairs;
  report.reality_fraction = total == 0 ? kNaN : static_cast<double>(report.n_real) / total;
  rr.worst = real ? 0.0 : 1.0 - report.reality_fraction;

  report.checks = {ps, po};
  if (real) {
    report.checks.push_back(dg);
    report.checks.push_back(fp);
  }
  report.checks.push_back(rr);
  report.checks.push_back(errors);
  return report;
}

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<double>& lambdas,
                                const std::vector<double>& mus) {
  if (lambdas.empty() || mus.empty()) {
    throw Error(ErrorCode::invalid_argument, "sweep grids must be nonempty");
  }
  std::vector<SweepRow> rows;
  for (double l : lambdas) {
    for (double m : mus) {
      RunConfig cfg = base;
      cfg.lambda = l;
      cfg.mu = m;
      cfg.normalize();
      const StatsResult s = compute_stats(generate_ensemble(cfg));
      rows.push_back({cfg.lambda, cfg.mu, s.reality_fraction, s.ks_wigner});
    }
  }
  return rows;
}

}  // namespace psrm::pipeline
