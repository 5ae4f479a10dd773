#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torelli::exactalg {

using Int = boost::multiprecision::cpp_int;

/// Dense matrix over Z with arbitrary-precision entries. Every operation in
/// this module is exact; there is no floating point anywhere in the library.
class IntMatrix {
 public:
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix: zero dimension");
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Int& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const Int& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = at(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
      }
    return r;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("IntMatrix: shape mismatch in sum");
    IntMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("IntMatrix: shape mismatch in difference");
    IntMatrix r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= o.e_[i];
    return r;
  }

  IntMatrix transposed() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t h, std::size_t w) const {
    if (r0 + h > rows_ || c0 + w > cols_) throw std::invalid_argument("IntMatrix: block out of range");
    IntMatrix b(h, w);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) b.at(i, j) = at(r0 + i, c0 + j);
    return b;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> e_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("det: non-square input");
  const std::size_t n = a.rows();
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m.at(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = num / prev;  // division is exact in the Bareiss scheme
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

/// A = U * D * V with U, V unimodular and D = diag(d1,...,dr,0,...,0),
/// di > 0 and di | d(i+1). Factors are normalized positive.
struct SmithDecomposition {
  IntMatrix U, D, V;
  std::vector<Int> invariant_factors;
};

namespace detail {

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t nr = a.rows(), nc = a.cols();
  IntMatrix d = a;
  IntMatrix u = IntMatrix::identity(nr);
  IntMatrix v = IntMatrix::identity(nc);

  // Elementary operations on d with the inverse operation mirrored on u or v,
  // keeping a == u * d * v at every step.
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < nc; ++c) std::swap(d.at(i, c), d.at(j, c));
    for (std::size_t r = 0; r < nr; ++r) std::swap(u.at(r, i), u.at(r, j));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < nr; ++r) std::swap(d.at(r, i), d.at(r, j));
    for (std::size_t c = 0; c < nc; ++c) std::swap(v.at(i, c), v.at(j, c));
  };
  auto add_row = [&](std::size_t i, std::size_t j, const Int& q) {
    // row_i += q * row_j ; u <- u * (I - q e_ji): col_i(u) -= q * ... careful:
    // d <- E d with E = I + q e_ij, so u <- u E^{-1}, i.e. col_j(u) -= q*col_i? no:
    // u (I - q e_ij): col_j(u) -= q * col_i(u).
    if (q == 0) return;
    for (std::size_t c = 0; c < nc; ++c) d.at(i, c) += q * d.at(j, c);
    for (std::size_t r = 0; r < nr; ++r) u.at(r, j) -= q * u.at(r, i);
  };
  auto add_col = [&](std::size_t i, std::size_t j, const Int& q) {
    // col_i += q * col_j ; d <- d F with F = I + q e_ji, v <- F^{-1} v:
    // row_j(v) -= q * row_i(v).
    if (q == 0) return;
    for (std::size_t r = 0; r < nr; ++r) d.at(r, i) += q * d.at(r, j);
    for (std::size_t c = 0; c < nc; ++c) v.at(j, c) -= q * v.at(i, c);
  };
  auto negate_row = [&](std::size_t i) {
    for (std::size_t c = 0; c < nc; ++c) d.at(i, c) = -d.at(i, c);
    for (std::size_t r = 0; r < nr; ++r) u.at(r, i) = -u.at(r, i);
  };

  const std::size_t steps = nr < nc ? nr : nc;
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Smallest nonzero absolute value as pivot; bounds intermediate growth.
      std::size_t pi = nr, pj = nc;
      Int best = 0;
      for (std::size_t i = t; i < nr; ++i)
        for (std::size_t j = t; j < nc; ++j) {
          if (d.at(i, j) == 0) continue;
          Int m = detail::abs_int(d.at(i, j));
          if (pi == nr || m < best) {
            best = m;
            pi = i;
            pj = j;
          }
        }
      if (pi == nr) {
        t = steps;  // remaining submatrix is zero
        break;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool changed = false;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (d.at(i, t) == 0) continue;
        Int q = d.at(i, t) / d.at(t, t);
        add_row(i, t, -q);
        if (d.at(i, t) != 0) changed = true;
      }
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (d.at(t, j) == 0) continue;
        Int q = d.at(t, j) / d.at(t, t);
        add_col(j, t, -q);
        if (d.at(t, j) != 0) changed = true;
      }
      if (changed) continue;

      // Pivot must divide the rest of the submatrix for the factor chain.
      bool fixed = false;
      for (std::size_t i = t + 1; i < nr && !fixed; ++i)
        for (std::size_t j = t + 1; j < nc && !fixed; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            add_row(t, i, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (t >= steps) break;
  }

  for (std::size_t t = 0; t < steps; ++t)
    if (d.at(t, t) < 0) negate_row(t);

  SmithDecomposition out{std::move(u), std::move(d), std::move(v), {}};
  for (std::size_t t = 0; t < steps; ++t)
    if (out.D.at(t, t) != 0) out.invariant_factors.push_back(out.D.at(t, t));
  return out;
}

}  // namespace torelli::exactalg
