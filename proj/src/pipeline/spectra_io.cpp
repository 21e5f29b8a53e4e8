#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "psrm/analytic/curves.hpp"
#include "psrm/analytic/two_by_two.hpp"
#include "psrm/error.hpp"
#include "psrm/pipeline/pipeline.hpp"

namespace psrm::pipeline {

namespace {

constexpr std::string_view kPairsTag = "im_pairs:";
constexpr std::string_view kFailedTag = "failed:";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_index(std::string_view text, std::size_t line_no) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": bad matrix index");
  }
  return v;
}

// Messages must stay on one line and must not look like a separator.
std::string sanitize(std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  std::replace(msg.begin(), msg.end(), '\r', ' ');
  std::replace(msg.begin(), msg.end(), ';', ',');
  return msg;
}

std::string header_with(const RunConfig& cfg, std::string_view observable) {
  nlohmann::json header = nlohmann::json::parse(cfg.header_line());
  header["observable"] = observable;
  return header.dump();
}

}  // namespace

std::size_t EnsembleResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.ok; }));
}

void write_spectra(std::ostream& out, const EnsembleResult& result) {
  out << result.config.header_line() << '\n';
  std::string line;
  for (const SpectrumRecord& r : result.records) {
    line = std::to_string(r.index);
    if (!r.ok) {
      line += ';';
      line += kFailedTag;
      line += sanitize(r.error);
    } else {
      for (double v : r.spectrum.real_eigs) {
        line += ',';
        line += format_double(v);
      }
      line += ';';
      line += kPairsTag;
      for (std::size_t i = 0; i < r.spectrum.complex_pairs.size(); ++i) {
        if (i > 0) line += ',';
        line += format_double(r.spectrum.complex_pairs[i].real());
        line += ':';
        line += format_double(r.spectrum.complex_pairs[i].imag());
      }
    }
    out << line << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed to write spectra");
}

EnsembleResult read_spectra(std::istream& in) {
  EnsembleResult result;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse, "spectra file is empty");
  result.config = RunConfig::from_header_line(line);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const std::size_t semi = line.find(';');
    if (semi == std::string::npos) throw Error(ErrorCode::parse, where + "missing ';'");
    const std::string_view head(line.data(), semi);
    const std::string_view tail = std::string_view(line).substr(semi + 1);

    SpectrumRecord r;
    const std::vector<std::string_view> fields = split(head, ',');
    r.index = parse_index(fields[0], line_no);
    if (tail.starts_with(kFailedTag)) {
      r.ok = false;
      r.error = std::string(tail.substr(kFailedTag.size()));
    } else if (tail.starts_with(kPairsTag)) {
      for (std::size_t i = 1; i < fields.size(); ++i) {
        r.spectrum.real_eigs.push_back(parse_double(fields[i]));
      }
      const std::string_view pairs = tail.substr(kPairsTag.size());
      if (!pairs.empty()) {
        for (std::string_view p : split(pairs, ',')) {
          const std::size_t colon = p.find(':');
          if (colon == std::string_view::npos) {
            throw Error(ErrorCode::parse, where + "complex pair without ':'");
          }
          const double im = parse_double(p.substr(colon + 1));
          if (!(im > 0.0)) {
            throw Error(ErrorCode::parse, where + "complex pair needs a positive imaginary part");
          }
          r.spectrum.complex_pairs.emplace_back(parse_double(p.substr(0, colon)), im);
        }
      }
      if (!std::is_sorted(r.spectrum.real_eigs.begin(), r.spectrum.real_eigs.end())) {
        throw Error(ErrorCode::parse, where + "real eigenvalues not sorted");
      }
      if (r.spectrum.dim() != result.config.n) {
        throw Error(ErrorCode::parse, where + "spectrum has " + std::to_string(r.spectrum.dim()) +
                                          " eigenvalues, expected " +
                                          std::to_string(result.config.n));
      }
    } else {
      throw Error(ErrorCode::parse, where + "unknown record tail");
    }
    if (r.index != result.records.size()) {
      throw Error(ErrorCode::parse, where + "expected matrix index " +
                                        std::to_string(result.records.size()));
    }
    result.records.push_back(std::move(r));
  }
  if (result.records.size() != result.config.count) {
    throw Error(ErrorCode::parse, "spectra file holds " + std::to_string(result.records.size()) +
                                      " records, header says " +
                                      std::to_string(result.config.count));
  }
  return result;
}

void write_histogram(std::ostream& out, const RunConfig& cfg, std::string_view observable,
                     const stats::Histogram& h) {
  out << header_with(cfg, observable) << '\n';
  out << "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << format_double(h.bin_lo(i)) << ',' << format_double(h.bin_hi(i)) << ','
        << format_double(h.densities[i]) << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed to write histogram");
}

Curve parse_curve(std::string_view name) {
  if (name == "wigner") return Curve::wigner;
  if (name == "semicircle") return Curve::semicircle;
  if (name == "spacing2x2") return Curve::spacing2x2;
  throw Error(ErrorCode::invalid_argument, "unknown curve '" + std::string(name) + "'");
}

std::string_view to_string(Curve curve) {
  switch (curve) {
    case Curve::wigner: return "wigner";
    case Curve::semicircle: return "semicircle";
    case Curve::spacing2x2: return "spacing2x2";
  }
  return "?";
}

void CurveTable::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "grid needs finite lo < hi");
  }
  if (points < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least 2 points");
  if (curve == Curve::spacing2x2 && (lambda == 0.0 || !std::isfinite(lambda))) {
    throw Error(ErrorCode::invalid_argument, "spacing2x2 needs a finite nonzero lambda");
  }
  if (curve != Curve::semicircle && lo < 0.0) {
    throw Error(ErrorCode::domain, "spacing curves are defined for s >= 0");
  }
}

std::vector<std::pair<double, double>> CurveTable::evaluate() const {
  validate();
  std::vector<std::pair<double, double>> rows(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = i + 1 == points ? hi : lo + step * static_cast<double>(i);
    double y = 0.0;
    switch (curve) {
      case Curve::wigner: y = analytic::wigner_surmise(x); break;
      case Curve::semicircle: y = analytic::semicircle(x); break;
      case Curve::spacing2x2: y = analytic::spacing_2x2(x, lambda); break;
    }
    rows[i] = {x, y};
  }
  return rows;
}

void write_curve_table(std::ostream& out, const CurveTable& table) {
  const auto rows = table.evaluate();
  nlohmann::json header = {{"tool", kToolName},
                           {"version", tool_version()},
                           {"curve", to_string(table.curve)},
                           {"lo", format_double(table.lo)},
                           {"hi", format_double(table.hi)},
                           {"points", table.points}};
  if (table.curve == Curve::spacing2x2) header["lambda"] = format_double(table.lambda);
  out << header.dump() << '\n' << "x,value\n";
  for (const auto& [x, y] : rows) out << format_double(x) << ',' << format_double(y) << '\n';
  if (!out) throw Error(ErrorCode::io, "failed to write curve table");
}

void write_sweep(std::ostream& out, const RunConfig& base, const std::vector<double>& lambdas,
                 const std::vector<double>& mus, const std::vector<SweepRow>& rows) {
  nlohmann::json header = nlohmann::json::parse(header_with(base, "sweep"));
  auto& grid = header["grid"];
  for (double l : lambdas) grid["lambdas"].push_back(format_double(l));
  for (double m : mus) grid["mus"].push_back(format_double(m));
  out << header.dump() << '\n';
  out << "lambda,mu,reality_fraction,ks_wigner\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.lambda) << ',' << format_double(r.mu) << ','
        << format_double(r.reality_fraction) << ',' << format_double(r.ks_wigner) << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed to write sweep");
}

}  // namespace psrm::pipeline
