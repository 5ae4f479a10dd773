#pragma once

#include "torelli/residue.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torelli::exactalg {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Subspace of F_p^n held as a reduced row-echelon basis. Exact membership
/// and closure tests; used as the carrier for all coinvariant computations.
class FpSubspace {
 public:
  FpSubspace(std::int64_t p, std::size_t ambient) : p_(p), ambient_(ambient) {
    if (!is_prime(p)) throw std::invalid_argument("FpSubspace: p must be prime");
  }

  std::int64_t p() const { return p_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::vector<std::int64_t>>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Reduce v against the basis in place; afterwards v has zeros at all pivot
  /// columns. Returns true when v reduced to zero (i.e. v was a member).
  bool reduce(std::vector<std::int64_t>& v) const {
    check(v);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::int64_t c = v[pivots_[r]] % p_;
      if (c == 0) continue;
      std::int64_t mul = p_ - c;
      const auto& row = rows_[r];
      for (std::size_t j = pivots_[r]; j < ambient_; ++j)
        v[j] = (v[j] + mul * row[j]) % p_;
    }
    for (auto& x : v)
      if (x != 0) return false;
    return true;
  }

  bool contains(std::vector<std::int64_t> v) const { return reduce(v); }

  /// Insert v; returns true if the rank grew.
  bool insert(std::vector<std::int64_t> v) {
    for (auto& x : v) x = ResidueMatrix::canonical(x, p_);
    if (reduce(v)) return false;
    std::size_t piv = 0;
    while (v[piv] == 0) ++piv;
    std::int64_t inv = inverse_unit(v[piv], p_);
    for (auto& x : v) x = (x * inv) % p_;
    // Back-eliminate to keep the basis fully reduced.
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      std::int64_t c = rows_[r][piv];
      if (c == 0) continue;
      std::int64_t mul = p_ - c;
      for (std::size_t j = piv; j < ambient_; ++j)
        rows_[r][j] = (rows_[r][j] + mul * v[j]) % p_;
    }
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, piv);
    return true;
  }

  bool operator==(const FpSubspace& o) const {
    return p_ == o.p_ && ambient_ == o.ambient_ && rows_ == o.rows_;
  }

 private:
  void check(const std::vector<std::int64_t>& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("FpSubspace: dimension mismatch");
  }

  std::int64_t p_;
  std::size_t ambient_;
  std::vector<std::vector<std::int64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Echelon-form span of the given vectors.
inline FpSubspace subspace_closure(const std::vector<std::vector<std::int64_t>>& vectors,
                                   std::size_t dimension, std::int64_t p) {
  FpSubspace s(p, dimension);
  for (const auto& v : vectors) s.insert(v);
  return s;
}

inline std::size_t quotient_dim(std::size_t ambient, const FpSubspace& s) {
  if (s.ambient() != ambient) throw std::invalid_argument("quotient_dim: ambient mismatch");
  return ambient - s.rank();
}

inline std::size_t rank_of(const std::vector<std::vector<std::int64_t>>& vectors,
                           std::size_t dimension, std::int64_t p) {
  return subspace_closure(vectors, dimension, p).rank();
}

/// Determinant of a small square matrix over F_p (rows as vectors).
inline std::int64_t fp_det(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  const std::size_t n = m.size();
  std::int64_t d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k] % p == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      d = p - d;
    }
    std::int64_t a = ResidueMatrix::canonical(m[k][k], p);
    d = (d * a) % p;
    std::int64_t inv = inverse_unit(a, p);
    for (std::size_t i = k + 1; i < n; ++i) {
      std::int64_t c = (ResidueMatrix::canonical(m[i][k], p) * inv) % p;
      if (c == 0) continue;
      for (std::size_t j = k; j < n; ++j)
        m[i][j] = ResidueMatrix::canonical(m[i][j] - c * m[k][j], p);
    }
  }
  return d;
}

}  // namespace torelli::exactalg
