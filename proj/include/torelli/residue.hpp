#pragma once

#include "torelli/exact_int.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torelli::exactalg {

struct NonInvertibleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Dense matrix over Z/m, entries kept canonical in {0,...,m-1}. The modulus
/// travels with every instance; mixing moduli is rejected.
class ResidueMatrix {
 public:
  ResidueMatrix(std::int64_t modulus, std::size_t rows, std::size_t cols)
      : m_(modulus), rows_(rows), cols_(cols), e_(rows * cols, 0) {
    if (modulus < 2) throw std::invalid_argument("ResidueMatrix: modulus must be >= 2");
    if (rows == 0 || cols == 0) throw std::invalid_argument("ResidueMatrix: zero dimension");
  }

  static ResidueMatrix identity(std::int64_t m, std::size_t n) {
    ResidueMatrix r(m, n, n);
    for (std::size_t i = 0; i < n; ++i) r.set(i, i, 1);
    return r;
  }

  static std::int64_t canonical(std::int64_t v, std::int64_t m) {
    v %= m;
    return v < 0 ? v + m : v;
  }

  /// Reduce an integer matrix mod m.
  static ResidueMatrix from_int(const IntMatrix& a, std::int64_t m) {
    ResidueMatrix r(m, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        Int v = a.at(i, j) % m;
        if (v < 0) v += m;
        r.e_[i * r.cols_ + j] = static_cast<std::int64_t>(v);
      }
    return r;
  }

  IntMatrix lift() const {
    IntMatrix a(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a.at(i, j) = at(i, j);
    return a;
  }

  std::int64_t modulus() const { return m_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  std::int64_t at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int64_t v) { e_[r * cols_ + c] = canonical(v, m_); }
  void add_at(std::size_t r, std::size_t c, std::int64_t v) { set(r, c, at(r, c) + canonical(v, m_)); }

  bool operator==(const ResidueMatrix& o) const {
    return m_ == o.m_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  ResidueMatrix operator*(const ResidueMatrix& o) const {
    check_modulus(o);
    if (cols_ != o.rows_) throw std::invalid_argument("ResidueMatrix: shape mismatch in product");
    ResidueMatrix r(m_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        std::int64_t a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          r.e_[i * r.cols_ + j] = (r.e_[i * r.cols_ + j] + a * o.at(k, j)) % m_;
      }
    return r;
  }

  ResidueMatrix operator+(const ResidueMatrix& o) const {
    check_modulus(o);
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("ResidueMatrix: shape mismatch in sum");
    ResidueMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = (r.e_[i] + o.e_[i]) % m_;
    return r;
  }

  ResidueMatrix operator-(const ResidueMatrix& o) const {
    check_modulus(o);
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("ResidueMatrix: shape mismatch in difference");
    ResidueMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = canonical(r.e_[i] - o.e_[i], m_);
    return r;
  }

  ResidueMatrix transposed() const {
    ResidueMatrix r(m_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
    return r;
  }

  ResidueMatrix scaled(std::int64_t c) const {
    ResidueMatrix r = *this;
    c = canonical(c, m_);
    for (auto& v : r.e_) v = (v * c) % m_;
    return r;
  }

  ResidueMatrix block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const {
    if (r0 + h > rows_ || c0 + w > cols_)
      throw std::invalid_argument("ResidueMatrix: block out of range");
    ResidueMatrix b(m_, h, w);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) b.set(i, j, at(r0 + i, c0 + j));
    return b;
  }

  void paste(std::size_t r0, std::size_t c0, const ResidueMatrix& src) {
    check_modulus(src);
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j) set(r0 + i, c0 + j, src.at(i, j));
  }

  bool is_zero() const {
    for (auto v : e_)
      if (v != 0) return false;
    return true;
  }

  /// Reduce to a smaller modulus m2 | m.
  ResidueMatrix reduced(std::int64_t m2) const {
    if (m_ % m2 != 0) throw std::invalid_argument("ResidueMatrix: reduction modulus must divide");
    ResidueMatrix r(m2, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.set(i, j, at(i, j) % m2);
    return r;
  }

  void check_modulus(const ResidueMatrix& o) const {
    if (m_ != o.m_) throw std::invalid_argument("ResidueMatrix: modulus mismatch");
  }

 private:
  std::int64_t m_;
  std::size_t rows_, cols_;
  std::vector<std::int64_t> e_;
};

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

/// Extended gcd: returns g and x, y with a*x + b*y = g.
inline std::int64_t egcd64(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = a < 0 ? -1 : 1;
    y = 0;
    return a < 0 ? -a : a;
  }
  std::int64_t x1, y1;
  std::int64_t g = egcd64(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline std::int64_t inverse_unit(std::int64_t a, std::int64_t m) {
  std::int64_t x, y;
  std::int64_t g = egcd64(ResidueMatrix::canonical(a, m), m, x, y);
  if (g != 1) throw NonInvertibleError("not a unit mod " + std::to_string(m));
  return ResidueMatrix::canonical(x, m);
}

/// Inverse over Z/m via the integral adjugate of the canonical lift; valid for
/// any modulus, prime or not. Signals NonInvertibleError when det is not a
/// unit mod m.
inline ResidueMatrix inverse_mod(const ResidueMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse_mod: non-square input");
  const std::size_t n = a.rows();
  const std::int64_t m = a.modulus();
  IntMatrix lift = a.lift();
  Int dz = det(lift) % m;
  if (dz < 0) dz += m;
  std::int64_t dinv = inverse_unit(static_cast<std::int64_t>(dz), m);

  ResidueMatrix inv(m, n, n);
  if (n == 1) {
    inv.set(0, 0, dinv);
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor.at(rr, cc) = lift.at(r, c);
          ++cc;
        }
        ++rr;
      }
      Int cof = det(minor) % m;
      if ((i + j) % 2 == 1) cof = -cof;
      Int v = (cof * dinv) % m;
      if (v < 0) v += m;
      inv.set(i, j, static_cast<std::int64_t>(v));
    }
  return inv;
}

}  // namespace torelli::exactalg
