#include "psrm/ensemble/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "psrm/error.hpp"

namespace psrm::ensemble {

PdfKind parse_pdf(std::string_view name) {
  if (name == "gaussian") return PdfKind::gaussian;
  if (name == "uniform") return PdfKind::uniform;
  throw Error(ErrorCode::invalid_argument, "unknown element pdf '" + std::string(name) + "'");
}

std::string_view to_string(PdfKind kind) {
  return kind == PdfKind::gaussian ? "gaussian" : "uniform";
}

double draw_element(const ElementPdf& pdf, bool diagonal, RngStream& rng) {
  const double sd = diagonal ? pdf.sigma * std::numbers::sqrt2 : pdf.sigma;
  if (pdf.kind == PdfKind::gaussian) return sd * rng.gaussian();
  // Uniform on [-a, a] has variance a^2 / 3.
  const double half_width = std::sqrt(3.0) * sd;
  return rng.uniform(-half_width, half_width);
}

linalg::DenseMatrix sample_symmetric(std::size_t n, const ElementPdf& pdf, RngStream& rng) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::invalid_argument,
                "sample_symmetric: n must be even and >= 2, got " + std::to_string(n));
  }
  if (!(pdf.sigma > 0.0) || !std::isfinite(pdf.sigma)) {
    throw Error(ErrorCode::invalid_argument, "sample_symmetric: sigma must be positive");
  }
  linalg::DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = draw_element(pdf, i == j, rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

}  // namespace psrm::ensemble
