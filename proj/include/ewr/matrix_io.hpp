#pragma once

#include <iosfwd>
#include <string>

#include "ewr/types.hpp"

namespace ewr {

// Text matrix format shared by every file the tools write:
//
//   # <rows> <cols> complex
//   re,im,re,im,...        (one line per row, 2*cols values)
//
// Values are printed with 17 significant digits so they round-trip exactly.
// Real matrices use the same layout with im = 0.

void write_matrix(std::ostream& os, const CMatrix& m);
void write_matrix(std::ostream& os, const RMatrix& m);
CMatrix read_matrix(std::istream& is);
/// Fails if any imaginary part is nonzero.
RMatrix read_real_matrix(std::istream& is);

void save_matrix(const std::string& path, const CMatrix& m);
void save_matrix(const std::string& path, const RMatrix& m);
CMatrix load_matrix(const std::string& path);
RMatrix load_real_matrix(const std::string& path);

/// "%.17g"; the one float formatting used in every text artifact.
std::string format_double(double x);

}  // namespace ewr
