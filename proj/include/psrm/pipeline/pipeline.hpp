#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "psrm/ensemble/sampling.hpp"
#include "psrm/family/family.hpp"
#include "psrm/linalg/dense_matrix.hpp"
#include "psrm/stats/spectral_stats.hpp"

namespace psrm::pipeline {

inline constexpr std::string_view kToolName = "psrm";
std::string_view tool_version();

// Default worker count: PSRM_THREADS if set to a positive integer, else 1.
unsigned default_threads();

struct RunConfig {
  std::string family = "q1";
  std::size_t n = 200;
  std::size_t count = 1000;
  double lambda = 0.9;
  double mu = 0.9;  // forced to lambda for q*/r*
  ensemble::PdfKind pdf = ensemble::PdfKind::gaussian;
  double sigma = 1.0;
  std::uint64_t seed = 1;
  stats::UnfoldMethod unfold = stats::UnfoldMethod::polynomial;
  int degree = 7;
  std::size_t bins = 50;
  double trim = 0.02;
  bool pooled_unfolding = false;
  unsigned threads = 1;  // never serialized; output does not depend on it

  // Checks every field and forces mu = lambda for q*/r*. Throws psrm::Error.
  void normalize();
  family::FamilySpec spec() const;
  stats::UnfoldConfig unfold_config() const;
  ensemble::ElementPdf element_pdf() const;

  // One-line JSON: {"tool":..., "version":..., "config":{...}}.
  std::string header_line() const;
  static RunConfig from_header_line(std::string_view line);
};

// One matrix of the ensemble.
struct SpectrumRecord {
  std::size_t index = 0;
  bool ok = true;
  linalg::Spectrum spectrum;
  std::string error;
};

struct EnsembleResult {
  RunConfig config;
  std::vector<SpectrumRecord> records;  // ordered by index

  std::size_t failures() const;
};

// Matrix `index` of the ensemble: M from stream (seed, index), then the
// symmetric fast path when lambda * mu > 0, the real Schur solver otherwise.
// Solver errors are caught and recorded.
SpectrumRecord compute_record(const RunConfig& cfg, std::size_t index);

// Schedule-independent: index i always uses stream i and lands in slot i.
EnsembleResult generate_ensemble(const RunConfig& cfg);

// Spectra file: header line, then `idx,re1,re2,...;im_pairs:re:im,...`
// per matrix, or `idx;failed:message` for a solver failure.
void write_spectra(std::ostream& out, const EnsembleResult& result);
EnsembleResult read_spectra(std::istream& in);

struct StatsResult {
  stats::Histogram nlsd;       // [0, 4]
  stats::Histogram density;    // rescaled eps on [-1.2, 1.2]
  std::vector<double> spacings;
  std::vector<double> rescaled_levels;
  std::size_t matrices_used = 0;
  std::size_t matrices_skipped = 0;  // too few real levels, or unusable fit
  std::size_t matrices_failed = 0;   // solver failures in the input
  std::size_t matrices_with_pairs = 0;
  std::size_t n_real = 0;
  std::size_t n_pairs = 0;
  double reality_fraction = 0.0;  // real eigenvalues / all eigenvalues
  double spacing_mean = 0.0;
  double ks_wigner = 0.0;   // NaN when no spacings
  double ks_poisson = 0.0;  // NaN when no spacings

  std::string summary_json(const RunConfig& cfg) const;
};

inline constexpr double kNlsdRange = 4.0;
inline constexpr double kDensityRange = 1.2;

// NLSD over real eigenvalues only, unfolded per matrix (or pooled when
// cfg.pooled_unfolding). Density pools every real eigenvalue. The analysis
// settings (unfold, degree, trim, bins, pooled, threads) come from
// `analysis`, or from the ensemble's own config.
StatsResult compute_stats(const EnsembleResult& ensemble);
StatsResult compute_stats(const EnsembleResult& ensemble, const RunConfig& analysis);

// `bin_lo,bin_hi,density` rows after the header line.
void write_histogram(std::ostream& out, const RunConfig& cfg, std::string_view observable,
                     const stats::Histogram& h);

enum class Curve { wigner, semicircle, spacing2x2 };
Curve parse_curve(std::string_view name);
std::string_view to_string(Curve curve);

struct CurveTable {
  Curve curve = Curve::wigner;
  double lambda = 1.0;  // spacing2x2 only
  double lo = 0.0;
  double hi = 4.0;
  std::size_t points = 81;

  void validate() const;
  std::vector<std::pair<double, double>> evaluate() const;
};

// `x,value` rows after a JSON header line.
void write_curve_table(std::ostream& out, const CurveTable& table);

struct VerifyOptions {
  // Test hook: adds fault_size to H(0, n-1) before the identity checks.
  bool inject_fault = false;
  double fault_size = 1e-3;
};

struct CheckSummary {
  std::string name;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // max residual / scale
  double tolerance = 0.0;
  bool informational = false;
};

struct VerifyReport {
  RunConfig config;
  std::vector<CheckSummary> checks;
  std::size_t instances = 0;
  std::size_t n_real = 0;
  std::size_t n_pairs = 0;
  std::size_t instances_with_pairs = 0;
  double reality_fraction = 0.0;

  bool passed() const;
  std::string to_json() const;
};

// Pseudo-symmetry, pseudo-orthogonality, diagonalization, fast path vs real
// Schur and the reality regime on cfg.count random instances.
VerifyReport run_verify(const RunConfig& cfg, const VerifyOptions& opts = {});

struct SweepRow {
  double lambda = 0.0;
  double mu = 0.0;
  double reality_fraction = 0.0;
  double ks_wigner = 0.0;  // NaN when no matrix had enough real levels
};

// One ensemble per (lambda, mu) cell with the base config otherwise.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<double>& lambdas,
                                const std::vector<double>& mus);
void write_sweep(std::ostream& out, const RunConfig& base, const std::vector<double>& lambdas,
                 const std::vector<double>& mus, const std::vector<SweepRow>& rows);

// %.17g
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace psrm::pipeline
