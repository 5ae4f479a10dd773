#pragma once

#include "torelli/exact_int.hpp"
#include "torelli/residue.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace torelli::exactalg {

/// Matrix text format used repo-wide:
///   first line  `rows cols [modulus]`
///   then whitespace-separated integers, `#` starts a comment line.
/// Files describing symplectic or gluing data may precede the matrix with a
/// header line `genus g [modulus m]`.
struct MatrixFile {
  std::optional<std::size_t> genus;
  std::optional<std::int64_t> header_modulus;
  std::optional<std::int64_t> modulus;  // from the `rows cols modulus` line
  IntMatrix entries{1, 1};
};

namespace detail {

inline bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace detail

inline MatrixFile read_matrix_file(std::istream& in) {
  MatrixFile f;
  std::string line;
  if (!detail::next_data_line(in, line)) throw std::invalid_argument("matrix file: empty input");

  std::istringstream hdr(line);
  std::string first;
  hdr >> first;
  if (first == "genus") {
    std::size_t g;
    if (!(hdr >> g)) throw std::invalid_argument("matrix file: bad genus header");
    f.genus = g;
    std::string kw;
    if (hdr >> kw) {
      if (kw != "modulus") throw std::invalid_argument("matrix file: bad header keyword");
      std::int64_t m;
      if (!(hdr >> m)) throw std::invalid_argument("matrix file: bad header modulus");
      f.header_modulus = m;
    }
    if (!detail::next_data_line(in, line)) throw std::invalid_argument("matrix file: missing size line");
  }

  std::istringstream sz(line);
  std::size_t rows, cols;
  if (!(sz >> rows >> cols)) throw std::invalid_argument("matrix file: bad size line");
  std::int64_t m;
  if (sz >> m) f.modulus = m;

  f.entries = IntMatrix(rows, cols);
  std::size_t count = 0;
  while (count < rows * cols) {
    if (!detail::next_data_line(in, line)) throw std::invalid_argument("matrix file: not enough entries");
    std::istringstream es(line);
    std::string tok;
    while (count < rows * cols && es >> tok) {
      f.entries.at(count / cols, count % cols) = Int(tok);
      ++count;
    }
  }
  return f;
}

inline void write_matrix(std::ostream& out, const IntMatrix& a,
                         std::optional<std::int64_t> modulus = std::nullopt) {
  out << a.rows() << ' ' << a.cols();
  if (modulus) out << ' ' << *modulus;
  out << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << a.at(i, j);
    }
    out << '\n';
  }
}

inline void write_matrix(std::ostream& out, const ResidueMatrix& a) {
  write_matrix(out, a.lift(), a.modulus());
}

}  // namespace torelli::exactalg
