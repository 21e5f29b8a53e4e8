// psrm command line: generate | stats | analytic | verify | sweep.
// Talks to the library only through the C interface.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psrm/psrm.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(psrm_status s) {
  switch (s) {
    case PSRM_OK: return kOk;
    case PSRM_ERR_INVALID_ARGUMENT:
    case PSRM_ERR_PARSE:
    case PSRM_ERR_IO:
    case PSRM_ERR_BUFFER_TOO_SMALL: return kUsage;
    default: return kNumerical;
  }
}

void check(psrm_status s, const char* what) {
  if (s != PSRM_OK) {
    throw Failure{exit_code_for(s), std::string(what) + ": " + psrm_last_error()};
  }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Config = std::unique_ptr<psrm_config, Deleter<psrm_config, psrm_config_destroy>>;
using Ensemble = std::unique_ptr<psrm_ensemble, Deleter<psrm_ensemble, psrm_ensemble_destroy>>;
using Stats = std::unique_ptr<psrm_stats, Deleter<psrm_stats, psrm_stats_destroy>>;
using Report = std::unique_ptr<psrm_verify_report, Deleter<psrm_verify_report, psrm_verify_destroy>>;

// RunConfig flags; only options given on the command line override the
// library defaults.
struct ConfigFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  bool pooled = false;
  CLI::Option* pooled_flag = nullptr;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    options.emplace_back(key, app->add_option("--" + key, values[key], help));
  }

  void add_all(CLI::App* app) {
    add(app, "family", "q1 q2 r1 r2 r3 gq1 gq2 gr1 gr2 gr3 (default q1)");
    add(app, "n", "matrix dimension, even (default 200)");
    add(app, "count", "number of matrices (default 1000)");
    add(app, "lambda", "family parameter lambda (default 0.9)");
    add(app, "mu", "second parameter for gq*/gr*; ignored for q*/r*");
    add(app, "pdf", "gaussian or uniform (default gaussian)");
    add(app, "sigma", "off-diagonal standard deviation (default 1)");
    add(app, "seed", "64-bit seed (default 1)");
    add(app, "unfold", "polynomial or semicircle (default polynomial)");
    add(app, "degree", "unfolding polynomial degree (default 7)");
    add(app, "bins", "histogram bins (default 50)");
    add(app, "trim", "fraction trimmed per spectrum edge (default 0.02)");
    add(app, "threads", "worker threads (default $PSRM_THREADS or 1)");
    pooled_flag = app->add_flag("--pooled", pooled, "unfold with one ensemble-wide staircase");
  }

  bool given(const std::string& key) const {
    for (const auto& [k, opt] : options) {
      if (k == key) return opt->count() > 0;
    }
    return key == "pooled" && pooled_flag->count() > 0;
  }

  // Applies the given flags on top of `cfg`.
  Config apply(Config cfg) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) {
        check(psrm_config_set(cfg.get(), key.c_str(), values.at(key).c_str()), "config");
      }
    }
    if (pooled_flag->count() > 0) {
      check(psrm_config_set(cfg.get(), "pooled", pooled ? "1" : "0"), "config");
    }
    check(psrm_config_validate(cfg.get()), "config");
    return cfg;
  }

  Config build() const {
    psrm_config* raw = nullptr;
    check(psrm_config_create(&raw), "config");
    return apply(Config(raw));
  }
};

int run_generate(const ConfigFlags& flags, const std::string& out) {
  Config cfg = flags.build();
  psrm_ensemble* raw = nullptr;
  check(psrm_ensemble_generate(cfg.get(), &raw), "generate");
  Ensemble ens(raw);
  check(psrm_ensemble_write(ens.get(), out.c_str()), "write");
  const size_t failures = psrm_ensemble_failures(ens.get());
  for (size_t i = 0; i < psrm_ensemble_size(ens.get()) && failures > 0; ++i) {
    psrm_spectrum* s = nullptr;
    if (psrm_ensemble_record(ens.get(), i, &s) != PSRM_OK) {
      std::fprintf(stderr, "matrix %zu failed: %s\n", i, psrm_last_error());
    }
    psrm_spectrum_destroy(s);
  }
  std::fprintf(stderr, "generated %zu matrices, %zu failed\n", psrm_ensemble_size(ens.get()),
               failures);
  return failures == psrm_ensemble_size(ens.get()) ? kNumerical : kOk;
}

int run_stats(const ConfigFlags& flags, const std::string& input, const std::string& prefix) {
  Ensemble ens;
  Config analysis;
  psrm_ensemble* raw = nullptr;
  if (!input.empty()) {
    for (const char* key : {"family", "n", "count", "lambda", "mu", "pdf", "sigma", "seed"}) {
      if (flags.given(key)) {
        throw Failure{kUsage, std::string("--") + key + " describes the sample; it comes from the input file"};
      }
    }
    check(psrm_ensemble_read(input.c_str(), &raw), "read");
    ens.reset(raw);
    psrm_config* recorded = nullptr;
    check(psrm_ensemble_config(ens.get(), &recorded), "read");
    analysis = flags.apply(Config(recorded));
  } else {
    analysis = flags.build();
    check(psrm_ensemble_generate(analysis.get(), &raw), "generate");
    ens.reset(raw);
  }
  psrm_stats* sraw = nullptr;
  check(psrm_stats_compute(ens.get(), analysis.get(), &sraw), "stats");
  Stats st(sraw);
  if (!prefix.empty()) check(psrm_stats_write(st.get(), prefix.c_str()), "write");
  std::printf("%s\n", psrm_stats_summary_json(st.get()));
  psrm_stats_summary sum{};
  check(psrm_stats_get_summary(st.get(), &sum), "stats");
  if (sum.matrices_skipped > 0) {
    std::fprintf(stderr, "%zu matrices skipped (too few real levels for unfolding)\n",
                 sum.matrices_skipped);
  }
  return kOk;
}

int run_verify(const ConfigFlags& flags, bool inject_fault, const std::string& out) {
  Config cfg = flags.build();
  psrm_verify_report* raw = nullptr;
  check(psrm_verify_run(cfg.get(), inject_fault ? 1 : 0, &raw), "verify");
  Report report(raw);
  const std::string json = psrm_verify_json(report.get());
  if (out.empty() || out == "-") {
    std::printf("%s\n", json.c_str());
  } else {
    std::FILE* f = std::fopen(out.c_str(), "wb");
    if (f == nullptr) throw Failure{kUsage, "cannot open '" + out + "' for writing"};
    std::fprintf(f, "%s\n", json.c_str());
    std::fclose(f);
  }
  const bool ok = psrm_verify_passed(report.get()) != 0;
  std::fprintf(stderr, "verification %s\n", ok ? "passed" : "FAILED");
  return ok ? kOk : kVerification;
}

int run_sweep(const ConfigFlags& flags, const std::vector<double>& lambdas,
              const std::vector<double>& mus, const std::string& out) {
  Config cfg = flags.build();
  check(psrm_sweep(cfg.get(), lambdas.data(), lambdas.size(), mus.data(), mus.size(), nullptr,
                   out.c_str()),
        "sweep");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random pseudo-symmetric matrix ensembles: spectra, spacing statistics, checks"};
  app.set_version_flag("--version", std::string(psrm_version()));
  app.require_subcommand(1);

  ConfigFlags gen_flags, stats_flags, verify_flags, sweep_flags;

  std::string gen_out = "-";
  auto* gen = app.add_subcommand("generate", "sample an ensemble and write its spectra");
  gen_flags.add_all(gen);
  gen->add_option("-o,--out", gen_out, "spectra file ('-' for stdout)");

  std::string stats_in, stats_prefix;
  auto* st = app.add_subcommand("stats", "NLSD, density and reality statistics of an ensemble");
  stats_flags.add_all(st);
  st->add_option("-i,--input", stats_in, "spectra file from 'generate' (else sample one)");
  st->add_option("-o,--out-prefix", stats_prefix,
                 "write PREFIX.nlsd.csv, PREFIX.density.csv, PREFIX.summary.json");

  std::string curve = "wigner", an_out = "-";
  double an_lambda = 0.0, lo = 0.0, hi = 4.0;
  size_t points = 81;
  auto* an = app.add_subcommand("analytic", "tabulate a closed-form curve");
  an->add_option("--curve", curve, "wigner, semicircle or spacing2x2")
      ->check(CLI::IsMember({"wigner", "semicircle", "spacing2x2"}));
  auto* an_lambda_opt = an->add_option("--lambda", an_lambda, "lambda for spacing2x2");
  an->add_option("--lo", lo, "grid start");
  an->add_option("--hi", hi, "grid end");
  an->add_option("--points", points, "grid points, >= 2");
  an->add_option("-o,--out", an_out, "table file ('-' for stdout)");

  bool inject_fault = false;
  std::string verify_out = "-";
  auto* ver = app.add_subcommand("verify", "check the pseudo-symmetry identities on random instances");
  verify_flags.add_all(ver);
  ver->add_flag("--inject-fault", inject_fault, "test hook: perturb every H by 1e-3");
  ver->add_option("-o,--out", verify_out, "JSON report ('-' for stdout)");

  std::vector<double> lambdas, mus;
  std::string sweep_out = "-";
  auto* sw = app.add_subcommand("sweep", "reality fraction and NLSD over a (lambda, mu) grid");
  sweep_flags.add_all(sw);
  sw->add_option("--lambdas", lambdas, "comma-separated lambda grid, e.g. --lambdas=-1,1")
      ->delimiter(',')
      ->required();
  sw->add_option("--mus", mus, "comma-separated mu grid")->delimiter(',')->required();
  sw->add_option("-o,--out", sweep_out, "CSV file ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return run_generate(gen_flags, gen_out);
    if (*st) return run_stats(stats_flags, stats_in, stats_prefix);
    if (*an) {
      if (curve == "spacing2x2" && an_lambda_opt->count() == 0) {
        throw Failure{kUsage, "spacing2x2 needs --lambda"};
      }
      check(psrm_curve_write(curve.c_str(), an_lambda, lo, hi, points, an_out.c_str()), "analytic");
      return kOk;
    }
    if (*ver) return run_verify(verify_flags, inject_fault, verify_out);
    if (*sw) return run_sweep(sweep_flags, lambdas, mus, sweep_out);
  } catch (const Failure& f) {
    std::fprintf(stderr, "psrm: %s\n", f.message.c_str());
    return f.code;
  }
  return kUsage;
}
