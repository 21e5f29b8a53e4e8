#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "psrm/psrm.h"

namespace fs = std::filesystem;

namespace {

template <class T, void (*D)(T*)>
struct Deleter {
  void operator()(T* p) const { D(p); }
};
using Matrix = std::unique_ptr<psrm_matrix, Deleter<psrm_matrix, psrm_matrix_destroy>>;
using SpectrumH = std::unique_ptr<psrm_spectrum, Deleter<psrm_spectrum, psrm_spectrum_destroy>>;
using Config = std::unique_ptr<psrm_config, Deleter<psrm_config, psrm_config_destroy>>;
using Ensemble = std::unique_ptr<psrm_ensemble, Deleter<psrm_ensemble, psrm_ensemble_destroy>>;
using Stats = std::unique_ptr<psrm_stats, Deleter<psrm_stats, psrm_stats_destroy>>;
using Report = std::unique_ptr<psrm_verify_report, Deleter<psrm_verify_report, psrm_verify_destroy>>;
using Rng = std::unique_ptr<psrm_rng, Deleter<psrm_rng, psrm_rng_destroy>>;

Matrix make_matrix(std::size_t n, const std::vector<double>& v) {
  psrm_matrix* m = nullptr;
  REQUIRE(psrm_matrix_create(n, v.data(), &m) == PSRM_OK);
  return Matrix(m);
}

Config make_config(std::initializer_list<std::pair<const char*, const char*>> kv) {
  psrm_config* c = nullptr;
  REQUIRE(psrm_config_create(&c) == PSRM_OK);
  Config cfg(c);
  for (auto [k, v] : kv) REQUIRE(psrm_config_set(cfg.get(), k, v) == PSRM_OK);
  REQUIRE(psrm_config_validate(cfg.get()) == PSRM_OK);
  return cfg;
}

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / ("psrm_capi_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

double uniform_cdf(double x, void*) { return x < 0 ? 0 : (x > 1 ? 1 : x); }

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and status names") {
    CHECK(std::string(psrm_version()).size() > 0);
    CHECK(std::string(psrm_status_name(PSRM_OK)) == "ok");
    CHECK(std::string(psrm_status_name(PSRM_ERR_BUFFER_TOO_SMALL)).size() > 0);
  }

  TEST_CASE("scalar functions and argument errors") {
    double v = 0;
    CHECK(psrm_wigner_surmise(1.0, &v) == PSRM_OK);
    CHECK(v == doctest::Approx(M_PI / 2 * std::exp(-M_PI / 4)));
    CHECK(psrm_semicircle(0.0, &v) == PSRM_OK);
    CHECK(v == doctest::Approx(2 / M_PI));
    CHECK(psrm_bessel_i0(1.0, &v) == PSRM_OK);
    CHECK(v == doctest::Approx(1.2660658777520084));
    CHECK(psrm_elliptic_e(-1.0, &v) == PSRM_OK);
    CHECK(v == doctest::Approx(1.9100988945138560));
    CHECK(psrm_spacing_2x2(1.0, 1.0, &v) == PSRM_OK);
    CHECK(v == doctest::Approx(M_PI / 2 * std::exp(-M_PI / 4)));
    CHECK(psrm_wigner_surmise(-1.0, &v) != PSRM_OK);
    CHECK(std::string(psrm_last_error()).size() > 0);
    CHECK(psrm_wigner_surmise(1.0, nullptr) == PSRM_ERR_INVALID_ARGUMENT);
    CHECK(psrm_bessel_i0(800.0, &v) == PSRM_ERR_DOMAIN);
    CHECK(psrm_spacing_2x2(1.0, 0.0, &v) != PSRM_OK);
    double e1, e2, s;
    CHECK(psrm_eig2x2_q1(1, 2, 3, 2, &e1, &e2, &s) == PSRM_OK);
    CHECK(s == doctest::Approx(4 * std::sqrt(5.0)));
  }

  TEST_CASE("matrices, eigen solvers and buffer sizes") {
    const Matrix m = make_matrix(2, {0, -1, 1, 0});
    CHECK(psrm_matrix_dim(m.get()) == 2);
    psrm_spectrum* raw = nullptr;
    REQUIRE(psrm_general_eigen(m.get(), &raw) == PSRM_OK);
    const SpectrumH sp(raw);
    CHECK(psrm_spectrum_real_count(sp.get()) == 0);
    REQUIRE(psrm_spectrum_pair_count(sp.get()) == 1);
    double re = 9, im = 9;
    CHECK(psrm_spectrum_pairs(sp.get(), &re, &im, 1) == PSRM_OK);
    CHECK(re == doctest::Approx(0.0).scale(1.0));
    CHECK(im == doctest::Approx(1.0));

    const Matrix sym = make_matrix(2, {2, 1, 1, 2});
    double vals[2];
    psrm_matrix* vec = nullptr;
    CHECK(psrm_symmetric_eigen(sym.get(), vals, 2, &vec) == PSRM_OK);
    const Matrix vecs(vec);
    CHECK(vals[0] == doctest::Approx(1.0));
    CHECK(vals[1] == doctest::Approx(3.0));
    CHECK(psrm_symmetric_eigen(sym.get(), vals, 1, nullptr) == PSRM_ERR_BUFFER_TOO_SMALL);
    double out[4];
    CHECK(psrm_matrix_get(sym.get(), out, 3) == PSRM_ERR_BUFFER_TOO_SMALL);
    CHECK(psrm_matrix_get(sym.get(), out, 4) == PSRM_OK);

    psrm_matrix* bad = nullptr;
    const double nan_entry[] = {1, NAN, 0, 1};
    CHECK(psrm_matrix_create(2, nan_entry, &bad) == PSRM_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(psrm_general_eigen(nullptr, &raw) == PSRM_ERR_INVALID_ARGUMENT);
    psrm_matrix_destroy(nullptr);
  }

  TEST_CASE("family round trip through the C surface") {
    psrm_rng* r = nullptr;
    REQUIRE(psrm_rng_create(3, 0, &r) == PSRM_OK);
    const Rng rng(r);
    psrm_matrix* mraw = nullptr;
    REQUIRE(psrm_sample_symmetric(6, "gaussian", 1.0, rng.get(), &mraw) == PSRM_OK);
    const Matrix m(mraw);
    CHECK(psrm_sample_symmetric(5, "gaussian", 1.0, rng.get(), &mraw) != PSRM_OK);
    CHECK(psrm_sample_symmetric(6, "cauchy", 1.0, rng.get(), &mraw) == PSRM_ERR_INVALID_ARGUMENT);

    psrm_matrix* hraw = nullptr;
    REQUIRE(psrm_family_construct("gr1", 0.5, 2.0, m.get(), &hraw) == PSRM_OK);
    const Matrix h(hraw);
    double eta[6], zeta[6];
    REQUIRE(psrm_family_metric("gr1", 0.5, 2.0, 6, PSRM_METRIC_ETA, eta) == PSRM_OK);
    REQUIRE(psrm_family_metric("gr1", 0.5, 2.0, 6, PSRM_METRIC_ZETA, zeta) == PSRM_OK);
    psrm_residual res{};
    CHECK(psrm_check_pseudo_symmetry(h.get(), eta, 0.0, &res) == PSRM_OK);
    CHECK(res.passed == 1);

    psrm_matrix* sraw = nullptr;
    REQUIRE(psrm_family_associated_symmetric("gr1", 0.5, 2.0, m.get(), &sraw) == PSRM_OK);
    const Matrix s(sraw);
    double vals[6];
    psrm_matrix* draw = nullptr;
    REQUIRE(psrm_symmetric_eigen(s.get(), vals, 6, &draw) == PSRM_OK);
    const Matrix d(draw);
    psrm_matrix* dcraw = nullptr;
    REQUIRE(psrm_family_diagonalizer("gr1", 0.5, 2.0, d.get(), &dcraw) == PSRM_OK);
    const Matrix dcal(dcraw);
    CHECK(psrm_check_pseudo_orthogonality(dcal.get(), zeta, 0.0, &res) == PSRM_OK);
    CHECK(res.passed == 1);
    CHECK(psrm_check_diagonalization(h.get(), dcal.get(), 0.0, &res) == PSRM_OK);
    CHECK(res.passed == 1);

    psrm_spectrum* fraw = nullptr;
    REQUIRE(psrm_family_fastpath("gr1", 0.5, 2.0, m.get(), &fraw) == PSRM_OK);
    const SpectrumH fast(fraw);
    CHECK(psrm_spectrum_real_count(fast.get()) == 6);
    CHECK(psrm_family_fastpath("gr1", 0.5, -2.0, m.get(), &fraw) == PSRM_ERR_DOMAIN);
    CHECK(psrm_family_construct("q3", 0.5, 0.5, m.get(), &hraw) == PSRM_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("unfold size query and ks") {
    std::vector<double> levels(100);
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = 0.5 * i;
    std::size_t count = 0;
    CHECK(psrm_unfold(levels.data(), levels.size(), "polynomial", 7, 0.02, nullptr, 0, &count) ==
          PSRM_OK);
    REQUIRE(count > 0);
    std::vector<double> out(count);
    CHECK(psrm_unfold(levels.data(), levels.size(), "polynomial", 7, 0.02, out.data(), count - 1,
                      &count) == PSRM_ERR_BUFFER_TOO_SMALL);
    CHECK(psrm_unfold(levels.data(), levels.size(), "polynomial", 7, 0.02, out.data(), out.size(),
                      &count) == PSRM_OK);
    CHECK(out[1] - out[0] == doctest::Approx(1.0));
    const double one[] = {0.3};
    double d = 0;
    CHECK(psrm_ks_distance(one, 1, uniform_cdf, nullptr, &d) == PSRM_OK);
    CHECK(d == doctest::Approx(0.7));
    CHECK(psrm_ks_distance(one, 1, nullptr, nullptr, &d) == PSRM_ERR_INVALID_ARGUMENT);
    const double a[] = {0}, b[] = {1};
    CHECK(psrm_ks_two_sample(a, 1, b, 1, &d) == PSRM_OK);
    CHECK(d == 1.0);
  }

  TEST_CASE("config handling") {
    psrm_config* c = nullptr;
    REQUIRE(psrm_config_create(&c) == PSRM_OK);
    const Config cfg(c);
    CHECK(psrm_config_set(cfg.get(), "lambda", "abc") == PSRM_ERR_PARSE);
    CHECK(psrm_config_set(cfg.get(), "colour", "red") == PSRM_ERR_INVALID_ARGUMENT);
    CHECK(psrm_config_set(cfg.get(), "n", "7") == PSRM_OK);
    CHECK(psrm_config_validate(cfg.get()) == PSRM_ERR_INVALID_ARGUMENT);
    CHECK(psrm_config_set(cfg.get(), "n", "8") == PSRM_OK);
    CHECK(psrm_config_validate(cfg.get()) == PSRM_OK);
    const std::string header = psrm_config_header(cfg.get());
    psrm_config* back = nullptr;
    REQUIRE(psrm_config_from_header(header.c_str(), &back) == PSRM_OK);
    const Config b(back);
    CHECK(header == psrm_config_header(b.get()));
    CHECK(psrm_config_from_header("{", &back) == PSRM_ERR_PARSE);
  }

  TEST_CASE("ensemble, stats and files") {
    const Config cfg = make_config({{"family", "q1"}, {"n", "60"}, {"count", "20"}, {"seed", "9"}});
    psrm_ensemble* e = nullptr;
    REQUIRE(psrm_ensemble_generate(cfg.get(), &e) == PSRM_OK);
    const Ensemble ens(e);
    CHECK(psrm_ensemble_size(ens.get()) == 20);
    CHECK(psrm_ensemble_failures(ens.get()) == 0);
    psrm_spectrum* s = nullptr;
    REQUIRE(psrm_ensemble_record(ens.get(), 4, &s) == PSRM_OK);
    psrm_spectrum_destroy(s);
    CHECK(psrm_ensemble_record(ens.get(), 20, &s) == PSRM_ERR_INVALID_ARGUMENT);

    const fs::path dir = temp_dir();
    const std::string path = (dir / "spectra.csv").string();
    REQUIRE(psrm_ensemble_write(ens.get(), path.c_str()) == PSRM_OK);
    psrm_ensemble* r = nullptr;
    REQUIRE(psrm_ensemble_read(path.c_str(), &r) == PSRM_OK);
    const Ensemble reread(r);
    CHECK(psrm_ensemble_size(reread.get()) == 20);
    CHECK(psrm_ensemble_read((dir / "missing.csv").string().c_str(), &r) == PSRM_ERR_IO);
    {
      std::ofstream bad(dir / "bad.csv");
      bad << "garbage\n";
    }
    CHECK(psrm_ensemble_read((dir / "bad.csv").string().c_str(), &r) == PSRM_ERR_PARSE);

    psrm_stats* st = nullptr;
    REQUIRE(psrm_stats_compute(reread.get(), nullptr, &st) == PSRM_OK);
    const Stats stats(st);
    psrm_stats_summary sum{};
    REQUIRE(psrm_stats_get_summary(stats.get(), &sum) == PSRM_OK);
    CHECK(sum.matrices_used == 20);
    CHECK(sum.reality_fraction == 1.0);
    CHECK(sum.spacing_mean == doctest::Approx(1.0));
    CHECK(sum.ks_wigner < sum.ks_poisson);
    std::size_t bins = 0;
    const double* edges = nullptr;
    const double* dens = nullptr;
    REQUIRE(psrm_stats_histogram(stats.get(), PSRM_HIST_NLSD, &bins, &edges, &dens) == PSRM_OK);
    CHECK(bins == 50);
    double total = 0;
    for (std::size_t i = 0; i < bins; ++i) total += dens[i] * (edges[i + 1] - edges[i]);
    CHECK(total == doctest::Approx(1.0));
    const auto j = nlohmann::json::parse(psrm_stats_summary_json(stats.get()));
    CHECK(j.contains("ks"));

    const Config analysis = make_config({{"bins", "20"}});
    REQUIRE(psrm_stats_compute(reread.get(), analysis.get(), &st) == PSRM_OK);
    const Stats st2(st);
    REQUIRE(psrm_stats_histogram(st2.get(), PSRM_HIST_NLSD, &bins, &edges, &dens) == PSRM_OK);
    CHECK(bins == 20);

    const std::string prefix = (dir / "run").string();
    REQUIRE(psrm_stats_write(stats.get(), prefix.c_str()) == PSRM_OK);
    CHECK(fs::exists(prefix + ".nlsd.csv"));
    CHECK(fs::exists(prefix + ".density.csv"));
    CHECK(fs::exists(prefix + ".summary.json"));
    fs::remove_all(dir);
  }

  TEST_CASE("verify and sweep") {
    const Config cfg =
        make_config({{"family", "gq2"}, {"lambda", "0.5"}, {"mu", "2"}, {"n", "20"}, {"count", "4"}});
    psrm_verify_report* r = nullptr;
    REQUIRE(psrm_verify_run(cfg.get(), 0, &r) == PSRM_OK);
    const Report ok(r);
    CHECK(psrm_verify_passed(ok.get()) == 1);
    REQUIRE(psrm_verify_run(cfg.get(), 1, &r) == PSRM_OK);
    const Report bad(r);
    CHECK(psrm_verify_passed(bad.get()) == 0);
    CHECK(nlohmann::json::parse(psrm_verify_json(bad.get())).at("passed") == false);

    const double ls[] = {-1.0, 1.0}, ms[] = {1.0};
    psrm_sweep_row rows[2];
    REQUIRE(psrm_sweep(cfg.get(), ls, 2, ms, 1, rows, nullptr) == PSRM_OK);
    CHECK(rows[0].reality_fraction < 1.0);
    CHECK(rows[1].reality_fraction == 1.0);
    CHECK(psrm_sweep(cfg.get(), ls, 0, ms, 1, rows, nullptr) == PSRM_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("curve tables") {
    const fs::path dir = temp_dir();
    const std::string path = (dir / "curve.csv").string();
    CHECK(psrm_curve_write("spacing2x2", 0.9, 0.0, 4.0, 5, path.c_str()) == PSRM_OK);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 7);
    CHECK(psrm_curve_write("bogus", 0.9, 0.0, 4.0, 5, path.c_str()) == PSRM_ERR_INVALID_ARGUMENT);
    fs::remove_all(dir);
  }
}
