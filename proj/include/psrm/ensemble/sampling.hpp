#pragma once

#include <cstddef>
#include <string_view>

#include "psrm/ensemble/rng.hpp"
#include "psrm/linalg/dense_matrix.hpp"

namespace psrm::ensemble {

enum class PdfKind { gaussian, uniform };

// Element law with mean zero. Off-diagonal variance sigma^2, diagonal 2 sigma^2.
struct ElementPdf {
  PdfKind kind = PdfKind::gaussian;
  double sigma = 1.0;
};

PdfKind parse_pdf(std::string_view name);
std::string_view to_string(PdfKind kind);

// Draws one matrix element. Diagonal entries get twice the variance.
double draw_element(const ElementPdf& pdf, bool diagonal, RngStream& rng);

// Real symmetric n x n matrix built from exactly n(n+1)/2 independent draws,
// consumed row by row over the upper triangle. n must be even and >= 2.
linalg::DenseMatrix sample_symmetric(std::size_t n, const ElementPdf& pdf, RngStream& rng);

}  // namespace psrm::ensemble
