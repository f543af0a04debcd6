#include "rowsample/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rowsample {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& os, const DenseMatrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << format_double(a(i, j));
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write_matrix: stream failure");
}

DenseMatrix read_matrix(std::istream& is) {
  long long rows = -1, cols = -1;
  if (!(is >> rows >> cols))
    throw std::runtime_error("read_matrix: malformed header");
  if (rows < 0 || cols < 1)
    throw std::runtime_error("read_matrix: invalid dimensions");
  const std::size_t m = static_cast<std::size_t>(rows);
  const std::size_t n = static_cast<std::size_t>(cols);
  std::vector<double> data;
  data.reserve(m * n);
  for (std::size_t k = 0; k < m * n; ++k) {
    double v;
    if (!(is >> v))
      throw std::runtime_error("read_matrix: expected " +
                               std::to_string(m * n) + " entries, got " +
                               std::to_string(k));
    if (!std::isfinite(v))
      throw std::runtime_error("read_matrix: non-finite entry");
    data.push_back(v);
  }
  return DenseMatrix(m, n, std::move(data));
}

void write_matrix_file(const std::string& path, const DenseMatrix& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_matrix_file: cannot open " + path);
  write_matrix(os, a);
}

DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_matrix_file: cannot open " + path);
  return read_matrix(is);
}

}  // namespace rowsample
