#include "ewr/matrix_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ewr {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix(std::ostream& os, const CMatrix& m) {
  os << "# " << m.rows() << ' ' << m.cols() << " complex\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
    }
    os << '\n';
  }
}

void write_matrix(std::ostream& os, const RMatrix& m) { write_matrix(os, CMatrix(m.cast<cplx>())); }

namespace {

double parse_value(const std::string& tok, Index row) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw IoError("matrix file: bad number '" + tok + "' on data row " + std::to_string(row));
  return v;
}

}  // namespace

CMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("matrix file: missing header");
  std::istringstream hs(line);
  std::string hash, kind;
  long long rows = -1, cols = -1;
  hs >> hash >> rows >> cols >> kind;
  if (hash != "#" || rows < 0 || cols < 0 || kind != "complex")
    throw IoError("matrix file: malformed header '" + line + "'");
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw IoError("matrix file: expected " + std::to_string(rows) + " rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    Index count = 0;
    double re = 0.0;
    while (std::getline(ls, tok, ',')) {
      const double v = parse_value(tok, i);
      if (count >= 2 * cols) throw IoError("matrix file: too many values on row " + std::to_string(i));
      if (count % 2 == 0) {
        re = v;
      } else {
        m(i, count / 2) = cplx(re, v);
      }
      ++count;
    }
    if (count != 2 * cols)
      throw IoError("matrix file: row " + std::to_string(i) + " has " + std::to_string(count) +
                    " values, expected " + std::to_string(2 * cols));
  }
  return m;
}

RMatrix read_real_matrix(std::istream& is) {
  const CMatrix c = read_matrix(is);
  if (c.size() > 0 && c.imag().cwiseAbs().maxCoeff() != 0.0)
    throw IoError("matrix file: expected a real matrix (im = 0)");
  return c.real();
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void save_matrix(const std::string& path, const CMatrix& m) {
  auto f = open_out(path);
  write_matrix(f, m);
}

void save_matrix(const std::string& path, const RMatrix& m) {
  auto f = open_out(path);
  write_matrix(f, m);
}

CMatrix load_matrix(const std::string& path) {
  auto f = open_in(path);
  return read_matrix(f);
}

RMatrix load_real_matrix(const std::string& path) {
  auto f = open_in(path);
  return read_real_matrix(f);
}

}  // namespace ewr
