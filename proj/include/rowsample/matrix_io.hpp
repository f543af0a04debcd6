#pragma once

#include <iosfwd>
#include <string>

#include "rowsample/dense_matrix.hpp"

namespace rowsample {

// Text format: first line "rows cols", then one whitespace-separated row per
// line.  Values are written with 17 significant digits so a write/read round
// trip reproduces every double exactly.

void write_matrix(std::ostream& os, const DenseMatrix& a);
DenseMatrix read_matrix(std::istream& is);

void write_matrix_file(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix_file(const std::string& path);

std::string format_double(double v);  // shortest-ish 17-digit form

}  // namespace rowsample
