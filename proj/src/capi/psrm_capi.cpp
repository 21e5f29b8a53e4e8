#include "psrm/psrm.h"

#include <charconv>
#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <string_view>

#include "psrm/analytic/curves.hpp"
#include "psrm/analytic/special_functions.hpp"
#include "psrm/analytic/two_by_two.hpp"
#include "psrm/ensemble/rng.hpp"
#include "psrm/ensemble/sampling.hpp"
#include "psrm/error.hpp"
#include "psrm/family/family.hpp"
#include "psrm/linalg/eigen.hpp"
#include "psrm/pipeline/pipeline.hpp"
#include "psrm/stats/spectral_stats.hpp"
#include "psrm/verify/verify.hpp"

using psrm::Error;
using psrm::ErrorCode;
using psrm::linalg::DenseMatrix;
namespace pipeline = psrm::pipeline;

struct psrm_matrix {
  DenseMatrix m;
};
struct psrm_rng {
  psrm::ensemble::RngStream rng;
};
struct psrm_spectrum {
  psrm::linalg::Spectrum s;
};
struct psrm_config {
  pipeline::RunConfig cfg;
  mutable std::string header;
};
struct psrm_ensemble {
  pipeline::EnsembleResult e;
};
struct psrm_stats {
  pipeline::RunConfig cfg;
  pipeline::StatsResult s;
  std::string summary;
};
struct psrm_verify_report {
  pipeline::VerifyReport r;
  std::string json;
};

namespace {

thread_local std::string last_error;

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

psrm_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return PSRM_ERR_INVALID_ARGUMENT;
    case ErrorCode::dimension_mismatch: return PSRM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::no_convergence: return PSRM_ERR_NO_CONVERGENCE;
    case ErrorCode::domain: return PSRM_ERR_DOMAIN;
    case ErrorCode::io: return PSRM_ERR_IO;
    case ErrorCode::parse: return PSRM_ERR_PARSE;
  }
  return PSRM_ERR_INTERNAL;
}

template <class F>
psrm_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PSRM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const BufferTooSmall& e) {
    last_error = e.what();
    return PSRM_ERR_BUFFER_TOO_SMALL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PSRM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PSRM_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return PSRM_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

void require_len(size_t have, size_t need) {
  if (have < need) {
    throw BufferTooSmall("buffer too small: need " + std::to_string(need) + ", got " + std::to_string(have));
  }
}

psrm::family::FamilySpec make_family(const char* family, double lambda, double mu, size_t n) {
  require(family, "family");
  const psrm::family::FamilyId id = psrm::family::parse_family(family);
  return psrm::family::make_spec(id.kind, id.k, lambda, mu, n);
}

template <class F>
psrm_status scalar(double* out, F&& f) {
  return guarded([&] {
    require(out, "out");
    *out = f();
  });
}

template <class T>
T parse_integer(std::string_view key, std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::invalid_argument,
                std::string(key) + ": expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::invalid_argument, std::string(key) + ": expected a boolean");
}

template <class F>
void with_output(const char* path, F&& f) {
  require(path, "path");
  if (std::string_view(path) == "-") {
    f(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, std::string("cannot open '") + path + "' for writing");
  f(out);
  out.close();
  if (!out) throw Error(ErrorCode::io, std::string("failed writing '") + path + "'");
}

}  // namespace

extern "C" {

const char* psrm_version(void) { return pipeline::tool_version().data(); }

const char* psrm_last_error(void) { return last_error.c_str(); }

const char* psrm_status_name(psrm_status status) {
  switch (status) {
    case PSRM_OK: return "ok";
    case PSRM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PSRM_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case PSRM_ERR_NO_CONVERGENCE: return "no convergence";
    case PSRM_ERR_DOMAIN: return "domain error";
    case PSRM_ERR_IO: return "i/o error";
    case PSRM_ERR_PARSE: return "parse error";
    case PSRM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case PSRM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

psrm_status psrm_wigner_surmise(double s, double* out) {
  return scalar(out, [&] { return psrm::analytic::wigner_surmise(s); });
}
psrm_status psrm_wigner_cdf(double s, double* out) {
  return scalar(out, [&] { return psrm::analytic::wigner_cdf(s); });
}
psrm_status psrm_poisson_cdf(double s, double* out) {
  return scalar(out, [&] { return psrm::analytic::poisson_cdf(s); });
}
psrm_status psrm_semicircle(double eps, double* out) {
  return scalar(out, [&] { return psrm::analytic::semicircle(eps); });
}
psrm_status psrm_semicircle_cdf(double eps, double* out) {
  return scalar(out, [&] { return psrm::analytic::semicircle_cdf(eps); });
}
psrm_status psrm_bessel_i0(double x, double* out) {
  return scalar(out, [&] { return psrm::analytic::bessel_i0(x); });
}
psrm_status psrm_elliptic_e(double m, double* out) {
  return scalar(out, [&] { return psrm::analytic::elliptic_e(m); });
}
psrm_status psrm_spacing_2x2(double s, double lambda, double* out) {
  return scalar(out, [&] { return psrm::analytic::spacing_2x2(s, lambda); });
}
psrm_status psrm_spacing_2x2_cdf(double s, double lambda, double* out) {
  return scalar(out, [&] { return psrm::analytic::spacing_2x2_cdf(s, lambda); });
}
psrm_status psrm_jpdf_2x2(double e1, double e2, double lambda, double* out) {
  return scalar(out, [&] { return psrm::analytic::jpdf_2x2(e1, e2, lambda); });
}
psrm_status psrm_jpdf_normalizer(double lambda, double* out) {
  return scalar(out, [&] { return psrm::analytic::jpdf_normalizer(lambda); });
}

psrm_status psrm_eig2x2_q1(double a11, double a12, double a22, double lambda, double* e1,
                           double* e2, double* spacing) {
  return guarded([&] {
    if (lambda == 0.0) throw Error(ErrorCode::invalid_argument, "lambda must be nonzero");
    const auto r = psrm::analytic::eig2x2_q1(a11, a12, a22, lambda);
    if (e1) *e1 = r.e1;
    if (e2) *e2 = r.e2;
    if (spacing) *spacing = r.spacing;
  });
}

psrm_status psrm_matrix_create(size_t n, const double* row_major, psrm_matrix** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (row_major == nullptr) {
      *out = new psrm_matrix{DenseMatrix(n)};
    } else {
      *out = new psrm_matrix{DenseMatrix(n, std::vector<double>(row_major, row_major + n * n))};
    }
  });
}

void psrm_matrix_destroy(psrm_matrix* m) { delete m; }

size_t psrm_matrix_dim(const psrm_matrix* m) { return m ? m->m.dim() : 0; }

psrm_status psrm_matrix_get(const psrm_matrix* m, double* row_major, size_t len) {
  return guarded([&] {
    require(m, "matrix");
    require(row_major, "row_major");
    const auto data = m->m.data();
    require_len(len, data.size());
    std::copy(data.begin(), data.end(), row_major);
  });
}

psrm_status psrm_rng_create(uint64_t seed, uint64_t stream, psrm_rng** out) {
  return guarded([&] {
    require(out, "out");
    *out = new psrm_rng{psrm::ensemble::RngStream(seed, stream)};
  });
}

void psrm_rng_destroy(psrm_rng* rng) { delete rng; }

psrm_status psrm_rng_uniform01(psrm_rng* rng, double* out) {
  return guarded([&] {
    require(rng, "rng");
    require(out, "out");
    *out = rng->rng.uniform01();
  });
}

psrm_status psrm_rng_gaussian(psrm_rng* rng, double* out) {
  return guarded([&] {
    require(rng, "rng");
    require(out, "out");
    *out = rng->rng.gaussian();
  });
}

psrm_status psrm_sample_symmetric(size_t n, const char* pdf, double sigma, psrm_rng* rng,
                                  psrm_matrix** out) {
  return guarded([&] {
    require(pdf, "pdf");
    require(rng, "rng");
    require(out, "out");
    const psrm::ensemble::ElementPdf law{psrm::ensemble::parse_pdf(pdf), sigma};
    *out = new psrm_matrix{psrm::ensemble::sample_symmetric(n, law, rng->rng)};
  });
}

psrm_status psrm_sample_q1_2x2_spacings(double lambda, size_t count, int weight, psrm_rng* rng,
                                        double* out) {
  return guarded([&] {
    require(rng, "rng");
    require(out, "out");
    if (weight != 0 && weight != 1) throw Error(ErrorCode::invalid_argument, "weight must be 0 or 1");
    const auto w = weight == 0 ? psrm::analytic::TwoByTwoWeight::trace_weight
                               : psrm::analytic::TwoByTwoWeight::doubled_diagonal;
    const auto s = psrm::analytic::sample_q1_2x2_spacings(lambda, count, w, rng->rng);
    std::copy(s.begin(), s.end(), out);
  });
}

void psrm_spectrum_destroy(psrm_spectrum* s) { delete s; }

size_t psrm_spectrum_real_count(const psrm_spectrum* s) { return s ? s->s.real_eigs.size() : 0; }

size_t psrm_spectrum_pair_count(const psrm_spectrum* s) {
  return s ? s->s.complex_pairs.size() : 0;
}

psrm_status psrm_spectrum_real(const psrm_spectrum* s, double* out, size_t len) {
  return guarded([&] {
    require(s, "spectrum");
    const auto& v = s->s.real_eigs;
    if (v.empty()) return;
    require(out, "out");
    require_len(len, v.size());
    std::copy(v.begin(), v.end(), out);
  });
}

psrm_status psrm_spectrum_pairs(const psrm_spectrum* s, double* re, double* im, size_t len) {
  return guarded([&] {
    require(s, "spectrum");
    const auto& v = s->s.complex_pairs;
    if (v.empty()) return;
    require(re, "re");
    require(im, "im");
    require_len(len, v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      re[i] = v[i].real();
      im[i] = v[i].imag();
    }
  });
}

psrm_status psrm_general_eigen(const psrm_matrix* a, psrm_spectrum** out) {
  return guarded([&] {
    require(a, "matrix");
    require(out, "out");
    *out = new psrm_spectrum{psrm::linalg::general_eigen(a->m)};
  });
}

psrm_status psrm_symmetric_eigen(const psrm_matrix* a, double* values, size_t len,
                                 psrm_matrix** vectors) {
  return guarded([&] {
    require(a, "matrix");
    require(values, "values");
    require_len(len, a->m.dim());
    psrm::linalg::SymmetricEigenOptions opts;
    opts.want_vectors = vectors != nullptr;
    auto r = psrm::linalg::sym_eigen(a->m, opts);
    std::copy(r.eigenvalues.begin(), r.eigenvalues.end(), values);
    if (vectors) *vectors = new psrm_matrix{std::move(*r.eigenvectors)};
  });
}

psrm_status psrm_family_construct(const char* family, double lambda, double mu,
                                  const psrm_matrix* m, psrm_matrix** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    const auto spec = make_family(family, lambda, mu, m->m.dim());
    *out = new psrm_matrix{psrm::family::construct(spec, m->m)};
  });
}

psrm_status psrm_family_metric(const char* family, double lambda, double mu, size_t n,
                               psrm_metric_kind kind, double* diagonal) {
  return guarded([&] {
    require(diagonal, "diagonal");
    const auto spec = make_family(family, lambda, mu, n);
    psrm::family::Metric metric;
    if (kind == PSRM_METRIC_ETA) {
      metric = psrm::family::metric_eta(spec);
    } else if (kind == PSRM_METRIC_ZETA) {
      metric = psrm::family::metric_zeta(spec);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown metric kind");
    }
    std::copy(metric.diagonal.begin(), metric.diagonal.end(), diagonal);
  });
}

psrm_status psrm_family_associated_symmetric(const char* family, double lambda, double mu,
                                             const psrm_matrix* m, psrm_matrix** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    const auto spec = make_family(family, lambda, mu, m->m.dim());
    *out = new psrm_matrix{psrm::family::associated_symmetric(spec, m->m)};
  });
}

psrm_status psrm_family_diagonalizer(const char* family, double lambda, double mu,
                                     const psrm_matrix* d, psrm_matrix** out) {
  return guarded([&] {
    require(d, "matrix");
    require(out, "out");
    const auto spec = make_family(family, lambda, mu, d->m.dim());
    *out = new psrm_matrix{psrm::family::diagonalizer(spec, d->m)};
  });
}

psrm_status psrm_family_fastpath(const char* family, double lambda, double mu,
                                 const psrm_matrix* m, psrm_spectrum** out) {
  return guarded([&] {
    require(m, "matrix");
    require(out, "out");
    const auto spec = make_family(family, lambda, mu, m->m.dim());
    *out = new psrm_spectrum{psrm::family::fastpath_spectrum(spec, m->m)};
  });
}

namespace {

void fill(psrm_residual* out, const psrm::verify::ResidualReport& r) {
  out->residual = r.residual;
  out->scale = r.scale;
  out->tolerance = r.tolerance;
  out->passed = r.passed ? 1 : 0;
}

psrm::family::Metric metric_from(const double* diagonal, size_t n) {
  require(diagonal, "metric diagonal");
  return {std::vector<double>(diagonal, diagonal + n), psrm::family::MetricRole::similarity};
}

}  // namespace

psrm_status psrm_check_pseudo_symmetry(const psrm_matrix* h, const double* eta_diagonal,
                                       double tol, psrm_residual* out) {
  return guarded([&] {
    require(h, "matrix");
    require(out, "out");
    const double t = tol > 0 ? tol : psrm::verify::kAlgebraicTolerance;
    fill(out, psrm::verify::check_pseudo_symmetry(h->m, metric_from(eta_diagonal, h->m.dim()), t));
  });
}

psrm_status psrm_check_pseudo_orthogonality(const psrm_matrix* dcal, const double* zeta_diagonal,
                                            double tol, psrm_residual* out) {
  return guarded([&] {
    require(dcal, "matrix");
    require(out, "out");
    const double t = tol > 0 ? tol : psrm::verify::kSolverTolerance;
    auto zeta = metric_from(zeta_diagonal, dcal->m.dim());
    zeta.role = psrm::family::MetricRole::orthogonality;
    fill(out, psrm::verify::check_pseudo_orthogonality(dcal->m, zeta, t));
  });
}

psrm_status psrm_check_diagonalization(const psrm_matrix* h, const psrm_matrix* dcal, double tol,
                                       psrm_residual* out) {
  return guarded([&] {
    require(h, "matrix");
    require(dcal, "diagonalizer");
    require(out, "out");
    const double t = tol > 0 ? tol : psrm::verify::kSolverTolerance;
    fill(out, psrm::verify::check_diagonalization(h->m, dcal->m, t));
  });
}

psrm_status psrm_unfold(const double* levels, size_t n, const char* method, int degree,
                        double trim, double* out, size_t len, size_t* count) {
  return guarded([&] {
    require(levels, "levels");
    require(method, "method");
    require(count, "count");
    psrm::stats::UnfoldConfig cfg;
    cfg.method = psrm::stats::parse_unfold_method(method);
    cfg.degree = degree;
    cfg.trim_fraction = trim;
    const auto e = psrm::stats::unfold(std::span<const double>(levels, n), cfg);
    *count = e.size();
    if (out == nullptr && len == 0) return;
    require(out, "out");
    require_len(len, e.size());
    std::copy(e.begin(), e.end(), out);
  });
}

psrm_status psrm_ks_distance(const double* sample, size_t n, psrm_cdf_fn cdf, void* context,
                             double* out) {
  return guarded([&] {
    require(sample, "sample");
    if (cdf == nullptr) throw Error(ErrorCode::invalid_argument, "cdf is NULL");
    require(out, "out");
    *out = psrm::stats::ks_distance(std::span<const double>(sample, n),
                                    [&](double x) { return cdf(x, context); });
  });
}

psrm_status psrm_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                               double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = psrm::stats::ks_two_sample(std::span<const double>(a, na), std::span<const double>(b, nb));
  });
}

psrm_status psrm_config_create(psrm_config** out) {
  return guarded([&] {
    require(out, "out");
    auto* c = new psrm_config{};
    c->cfg.threads = pipeline::default_threads();
    *out = c;
  });
}

void psrm_config_destroy(psrm_config* cfg) { delete cfg; }

psrm_status psrm_config_set(psrm_config* c, const char* key_c, const char* value_c) {
  return guarded([&] {
    require(c, "config");
    require(key_c, "key");
    require(value_c, "value");
    const std::string_view key = key_c;
    const std::string_view value = value_c;
    pipeline::RunConfig& cfg = c->cfg;
    if (key == "family") {
      cfg.family = std::string(value);
    } else if (key == "n") {
      cfg.n = parse_integer<std::size_t>(key, value);
    } else if (key == "count") {
      cfg.count = parse_integer<std::size_t>(key, value);
    } else if (key == "lambda") {
      cfg.lambda = pipeline::parse_double(value);
    } else if (key == "mu") {
      cfg.mu = pipeline::parse_double(value);
    } else if (key == "pdf") {
      cfg.pdf = psrm::ensemble::parse_pdf(value);
    } else if (key == "sigma") {
      cfg.sigma = pipeline::parse_double(value);
    } else if (key == "seed") {
      cfg.seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "unfold") {
      cfg.unfold = psrm::stats::parse_unfold_method(value);
    } else if (key == "degree") {
      cfg.degree = parse_integer<int>(key, value);
    } else if (key == "bins") {
      cfg.bins = parse_integer<std::size_t>(key, value);
    } else if (key == "trim") {
      cfg.trim = pipeline::parse_double(value);
    } else if (key == "threads") {
      cfg.threads = parse_integer<unsigned>(key, value);
    } else if (key == "pooled") {
      cfg.pooled_unfolding = parse_bool(key, value);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown config key '" + std::string(key) + "'");
    }
  });
}

psrm_status psrm_config_validate(psrm_config* c) {
  return guarded([&] {
    require(c, "config");
    c->cfg.normalize();
  });
}

const char* psrm_config_header(const psrm_config* c) {
  if (c == nullptr) return "";
  c->header = c->cfg.header_line();
  return c->header.c_str();
}

psrm_status psrm_config_from_header(const char* line, psrm_config** out) {
  return guarded([&] {
    require(line, "line");
    require(out, "out");
    *out = new psrm_config{pipeline::RunConfig::from_header_line(line), {}};
  });
}

psrm_status psrm_ensemble_generate(const psrm_config* c, psrm_ensemble** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    *out = new psrm_ensemble{pipeline::generate_ensemble(c->cfg)};
  });
}

psrm_status psrm_ensemble_read(const char* path, psrm_ensemble** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    if (std::string_view(path) == "-") {
      *out = new psrm_ensemble{pipeline::read_spectra(std::cin)};
      return;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, std::string("cannot open '") + path + "'");
    *out = new psrm_ensemble{pipeline::read_spectra(in)};
  });
}

psrm_status psrm_ensemble_write(const psrm_ensemble* e, const char* path) {
  return guarded([&] {
    require(e, "ensemble");
    with_output(path, [&](std::ostream& out) { pipeline::write_spectra(out, e->e); });
  });
}

void psrm_ensemble_destroy(psrm_ensemble* e) { delete e; }

size_t psrm_ensemble_size(const psrm_ensemble* e) { return e ? e->e.records.size() : 0; }

size_t psrm_ensemble_failures(const psrm_ensemble* e) { return e ? e->e.failures() : 0; }

psrm_status psrm_ensemble_record(const psrm_ensemble* e, size_t i, psrm_spectrum** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    if (i >= e->e.records.size()) throw Error(ErrorCode::invalid_argument, "record out of range");
    const auto& r = e->e.records[i];
    if (!r.ok) throw Error(ErrorCode::no_convergence, "record " + std::to_string(i) + ": " + r.error);
    *out = new psrm_spectrum{r.spectrum};
  });
}

psrm_status psrm_ensemble_config(const psrm_ensemble* e, psrm_config** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    *out = new psrm_config{e->e.config, {}};
  });
}

psrm_status psrm_stats_compute(const psrm_ensemble* e, const psrm_config* analysis,
                               psrm_stats** out) {
  return guarded([&] {
    require(e, "ensemble");
    require(out, "out");
    pipeline::RunConfig cfg = e->e.config;
    if (analysis) {
      cfg.unfold = analysis->cfg.unfold;
      cfg.degree = analysis->cfg.degree;
      cfg.trim = analysis->cfg.trim;
      cfg.bins = analysis->cfg.bins;
      cfg.pooled_unfolding = analysis->cfg.pooled_unfolding;
      cfg.threads = analysis->cfg.threads;
      cfg.normalize();
    }
    auto* s = new psrm_stats{cfg, pipeline::compute_stats(e->e, cfg), {}};
    s->summary = s->s.summary_json(s->cfg);
    *out = s;
  });
}

void psrm_stats_destroy(psrm_stats* s) { delete s; }

psrm_status psrm_stats_get_summary(const psrm_stats* s, psrm_stats_summary* out) {
  return guarded([&] {
    require(s, "stats");
    require(out, "out");
    const auto& r = s->s;
    *out = psrm_stats_summary{r.matrices_used, r.matrices_skipped, r.matrices_failed,
                              r.matrices_with_pairs, r.n_real, r.n_pairs, r.spacings.size(),
                              r.reality_fraction, r.spacing_mean, r.ks_wigner, r.ks_poisson};
  });
}

const char* psrm_stats_summary_json(const psrm_stats* s) { return s ? s->summary.c_str() : ""; }

psrm_status psrm_stats_histogram(const psrm_stats* s, psrm_histogram_kind kind, size_t* bins,
                                 const double** edges, const double** densities) {
  return guarded([&] {
    require(s, "stats");
    require(bins, "bins");
    const psrm::stats::Histogram* h = nullptr;
    if (kind == PSRM_HIST_NLSD) {
      h = &s->s.nlsd;
    } else if (kind == PSRM_HIST_DENSITY) {
      h = &s->s.density;
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown histogram kind");
    }
    *bins = h->bins();
    if (edges) *edges = h->bin_edges.data();
    if (densities) *densities = h->densities.data();
  });
}

psrm_status psrm_stats_spacings(const psrm_stats* s, const double** values, size_t* count) {
  return guarded([&] {
    require(s, "stats");
    require(values, "values");
    require(count, "count");
    *values = s->s.spacings.data();
    *count = s->s.spacings.size();
  });
}

psrm_status psrm_stats_rescaled_levels(const psrm_stats* s, const double** values, size_t* count) {
  return guarded([&] {
    require(s, "stats");
    require(values, "values");
    require(count, "count");
    *values = s->s.rescaled_levels.data();
    *count = s->s.rescaled_levels.size();
  });
}

psrm_status psrm_stats_write(const psrm_stats* s, const char* prefix) {
  return guarded([&] {
    require(s, "stats");
    require(prefix, "prefix");
    const std::string p = prefix;
    if (s->s.nlsd.bins() > 0) {
      with_output((p + ".nlsd.csv").c_str(), [&](std::ostream& out) {
        pipeline::write_histogram(out, s->cfg, "nlsd", s->s.nlsd);
      });
    }
    if (s->s.density.bins() > 0) {
      with_output((p + ".density.csv").c_str(), [&](std::ostream& out) {
        pipeline::write_histogram(out, s->cfg, "density", s->s.density);
      });
    }
    with_output((p + ".summary.json").c_str(),
                [&](std::ostream& out) { out << s->summary << '\n'; });
  });
}

psrm_status psrm_verify_run(const psrm_config* c, int inject_fault, psrm_verify_report** out) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    pipeline::VerifyOptions opts;
    opts.inject_fault = inject_fault != 0;
    auto* r = new psrm_verify_report{pipeline::run_verify(c->cfg, opts), {}};
    r->json = r->r.to_json();
    *out = r;
  });
}

void psrm_verify_destroy(psrm_verify_report* r) { delete r; }

int psrm_verify_passed(const psrm_verify_report* r) { return r && r->r.passed() ? 1 : 0; }

const char* psrm_verify_json(const psrm_verify_report* r) { return r ? r->json.c_str() : ""; }

psrm_status psrm_curve_write(const char* curve, double lambda, double lo, double hi, size_t points,
                             const char* path) {
  return guarded([&] {
    require(curve, "curve");
    pipeline::CurveTable t;
    t.curve = pipeline::parse_curve(curve);
    t.lambda = lambda;
    t.lo = lo;
    t.hi = hi;
    t.points = points;
    t.validate();
    with_output(path, [&](std::ostream& out) { pipeline::write_curve_table(out, t); });
  });
}

psrm_status psrm_sweep(const psrm_config* base, const double* lambdas, size_t n_lambdas,
                       const double* mus, size_t n_mus, psrm_sweep_row* rows, const char* path) {
  return guarded([&] {
    require(base, "config");
    require(lambdas, "lambdas");
    require(mus, "mus");
    const std::vector<double> ls(lambdas, lambdas + n_lambdas);
    const std::vector<double> ms(mus, mus + n_mus);
    const auto result = pipeline::run_sweep(base->cfg, ls, ms);
    if (rows) {
      for (size_t i = 0; i < result.size(); ++i) {
        rows[i] = {result[i].lambda, result[i].mu, result[i].reality_fraction, result[i].ks_wigner};
      }
    }
    if (path) {
      with_output(path, [&](std::ostream& out) { pipeline::write_sweep(out, base->cfg, ls, ms, result); });
    }
  });
}

}  // extern "C"
