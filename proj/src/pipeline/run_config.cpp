#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "psrm/error.hpp"
#include "psrm/pipeline/pipeline.hpp"

#ifndef PSRM_VERSION_STRING
#define PSRM_VERSION_STRING "0.0.0"
#endif

namespace psrm::pipeline {

using nlohmann::json;

std::string_view tool_version() { return PSRM_VERSION_STRING; }

unsigned default_threads() {
  const char* env = std::getenv("PSRM_THREADS");
  if (env == nullptr) return 1;
  unsigned v = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end || v == 0) return 1;
  return v;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorCode::parse, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

void RunConfig::normalize() {
  const family::FamilyId id = family::parse_family(family);
  family = family::family_name(id.kind, id.k);
  if (id.kind == family::FamilyKind::Q || id.kind == family::FamilyKind::R) mu = lambda;
  if (count == 0) throw Error(ErrorCode::invalid_argument, "count must be >= 1");
  if (bins == 0) throw Error(ErrorCode::invalid_argument, "bins must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::invalid_argument, "sigma must be positive and finite");
  }
  if (threads == 0) threads = 1;
  family::validate(spec());
  unfold_config().validate();
}

family::FamilySpec RunConfig::spec() const {
  const family::FamilyId id = family::parse_family(family);
  family::FamilySpec s;
  s.kind = id.kind;
  s.k = id.k;
  s.lambda = lambda;
  s.mu = (id.kind == family::FamilyKind::Q || id.kind == family::FamilyKind::R) ? lambda : mu;
  s.n = n;
  return s;
}

stats::UnfoldConfig RunConfig::unfold_config() const {
  stats::UnfoldConfig u;
  u.method = unfold;
  u.degree = degree;
  u.trim_fraction = trim;
  return u;
}

ensemble::ElementPdf RunConfig::element_pdf() const { return {pdf, sigma}; }

std::string RunConfig::header_line() const {
  // Doubles go through format_double so the header round-trips exactly.
  json cfg = {
      {"family", family},
      {"n", n},
      {"count", count},
      {"lambda", format_double(lambda)},
      {"mu", format_double(mu)},
      {"pdf", std::string(ensemble::to_string(pdf))},
      {"sigma", format_double(sigma)},
      {"seed", seed},
      {"unfold", std::string(stats::to_string(unfold))},
      {"degree", degree},
      {"bins", bins},
      {"trim", format_double(trim)},
      {"pooled_unfolding", pooled_unfolding},
  };
  json header = {{"tool", kToolName}, {"version", tool_version()}, {"config", cfg}};
  return header.dump();
}

RunConfig RunConfig::from_header_line(std::string_view line) {
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("header is not JSON: ") + e.what());
  }
  try {
    if (header.at("tool").get<std::string>() != kToolName) {
      throw Error(ErrorCode::parse, "header was written by another tool");
    }
    const json& c = header.at("config");
    RunConfig cfg;
    cfg.family = c.at("family").get<std::string>();
    cfg.n = c.at("n").get<std::size_t>();
    cfg.count = c.at("count").get<std::size_t>();
    cfg.lambda = parse_double(c.at("lambda").get<std::string>());
    cfg.mu = parse_double(c.at("mu").get<std::string>());
    cfg.pdf = ensemble::parse_pdf(c.at("pdf").get<std::string>());
    cfg.sigma = parse_double(c.at("sigma").get<std::string>());
    cfg.seed = c.at("seed").get<std::uint64_t>();
    cfg.unfold = stats::parse_unfold_method(c.at("unfold").get<std::string>());
    cfg.degree = c.at("degree").get<int>();
    cfg.bins = c.at("bins").get<std::size_t>();
    cfg.trim = parse_double(c.at("trim").get<std::string>());
    cfg.pooled_unfolding = c.at("pooled_unfolding").get<bool>();
    cfg.threads = default_threads();
    cfg.normalize();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("malformed header: ") + e.what());
  }
}

}  // namespace psrm::pipeline
