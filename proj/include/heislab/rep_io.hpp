// Text format for finite Heisenberg actions:
//
//   heislab-rep 1
//   group Z4xZ2
//   dim 16
//   U 0
//   <dim rows of 2·dim numbers: re im re im ...>
//   V 0
//   ...
//
// One U block and one V block per cyclic factor, in any order. Lines starting
// with '#' and blank lines are ignored.
#pragma once

#include "heislab/action.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace heislab {

class RepFormatError : public std::runtime_error {
 public:
  RepFormatError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RepresentationFile {
  FiniteAbelianGroup group;
  std::vector<ComplexMatrix> u;
  std::vector<ComplexMatrix> v;
};

inline RepresentationFile read_representation(std::istream& in) {
  int line_no = 0;
  auto next_line = [&](std::string& out) -> bool {
    while (std::getline(in, out)) {
      ++line_no;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line) || line.rfind("heislab-rep 1", 0) != 0) {
    throw RepFormatError("expected header 'heislab-rep 1'", line_no);
  }
  std::string key, spec;
  if (!next_line(line)) throw RepFormatError("missing 'group' line", line_no);
  {
    std::istringstream ss(line);
    if (!(ss >> key >> spec) || key != "group") throw RepFormatError("expected 'group <spec>'", line_no);
  }
  FiniteAbelianGroup group = [&] {
    try {
      return parse_group(spec);
    } catch (const StructuralError& e) {
      throw RepFormatError(e.what(), line_no);
    }
  }();
  long long dim = 0;
  if (!next_line(line)) throw RepFormatError("missing 'dim' line", line_no);
  {
    std::istringstream ss(line);
    if (!(ss >> key >> dim) || key != "dim" || dim < 1) throw RepFormatError("expected 'dim <positive integer>'", line_no);
  }

  const std::size_t r = group.rank();
  std::vector<ComplexMatrix> u(r), v(r);
  std::vector<char> seen_u(r, 0), seen_v(r, 0);
  while (next_line(line)) {
    std::istringstream ss(line);
    std::string kind;
    long long idx = -1;
    if (!(ss >> kind >> idx) || (kind != "U" && kind != "V")) throw RepFormatError("expected 'U <i>' or 'V <i>'", line_no);
    if (idx < 0 || static_cast<std::size_t>(idx) >= r) {
      throw RepFormatError("generator index " + std::to_string(idx) + " out of range for " + group.to_string(), line_no);
    }
    auto& seen = kind == "U" ? seen_u : seen_v;
    if (seen[static_cast<std::size_t>(idx)]) throw RepFormatError("duplicate block " + kind + " " + std::to_string(idx), line_no);
    seen[static_cast<std::size_t>(idx)] = 1;
    ComplexMatrix m(dim, dim);
    for (long long row = 0; row < dim; ++row) {
      if (!next_line(line)) throw RepFormatError("matrix block ends early", line_no);
      std::istringstream rs(line);
      for (long long col = 0; col < dim; ++col) {
        double re = 0.0, im = 0.0;
        if (!(rs >> re >> im)) throw RepFormatError("expected " + std::to_string(2 * dim) + " numbers per row", line_no);
        m(row, col) = {re, im};
      }
      double extra = 0.0;
      if (rs >> extra) throw RepFormatError("too many numbers in matrix row", line_no);
    }
    if (!m.allFinite()) throw RepFormatError("non-finite matrix entry", line_no);
    (kind == "U" ? u : v)[static_cast<std::size_t>(idx)] = std::move(m);
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!seen_u[i]) throw RepFormatError("missing block U " + std::to_string(i), line_no);
    if (!seen_v[i]) throw RepFormatError("missing block V " + std::to_string(i), line_no);
  }
  return {group, u, v};
}

inline RepresentationFile read_representation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RepFormatError("cannot open " + path, 0);
  return read_representation(in);
}

inline void write_representation(std::ostream& os, const HeisenbergAction& rho) {
  os << "heislab-rep 1\n";
  os << "group " << rho.group().to_string() << "\n";
  os << "dim " << rho.dim() << "\n";
  os << std::setprecision(17);
  auto block = [&](const char* kind, std::size_t i, const ComplexMatrix& m) {
    os << kind << " " << i << "\n";
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        if (col) os << " ";
        os << m(row, col).real() << " " << m(row, col).imag();
      }
      os << "\n";
    }
  };
  for (std::size_t i = 0; i < rho.group().rank(); ++i) block("U", i, rho.u_generators()[i]);
  for (std::size_t i = 0; i < rho.group().rank(); ++i) block("V", i, rho.v_generators()[i]);
}

}  // namespace heislab
