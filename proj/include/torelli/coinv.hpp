#pragma once

#include "torelli/fp_linear.hpp"
#include "torelli/multilinear.hpp"
#include "torelli/symplectic.hpp"
#include "torelli/trees.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace torelli::coinv {

using exactalg::FpSubspace;
using exactalg::ResidueMatrix;
using multilinear::Ext3Context;

// --- dense echelon core over F_p with delayed normalization ----------------

/// Row-echelon accumulator over F_p tuned for the large coinvariant spaces:
/// uint16 rows, axpy without per-element reduction (values stay below 2^16
/// for ~(2^16 / (p-1)^2) steps), scalar reads reduced on demand.
class FastEchelon {
 public:
  FastEchelon(std::int64_t p, std::size_t n)
      : p_(static_cast<std::uint32_t>(p)), n_(n), row_of_pivot_(n, -1) {
    axpy_cap_ = (65535u - (p_ - 1)) / ((p_ - 1) * (p_ - 1));
    if (axpy_cap_ == 0) throw std::invalid_argument("FastEchelon: modulus too large");
  }

  std::int64_t p() const { return p_; }
  std::size_t ambient() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<std::uint16_t>& row(std::size_t r) const { return rows_[r]; }
  const std::vector<std::size_t>& pivots() const { return pivot_of_row_; }

  void normalize(std::vector<std::uint16_t>& v) const {
    for (auto& x : v) x = static_cast<std::uint16_t>(x % p_);
  }

  /// Eliminate all pivot columns from v; true when v reduced to zero.
  bool reduce(std::vector<std::uint16_t>& v) const {
    std::uint32_t steps = 0;
    for (std::size_t c = 0; c < n_; ++c) {
      std::uint32_t val = v[c] % p_;
      if (val == 0) continue;
      long r = row_of_pivot_[c];
      if (r < 0) continue;
      const std::uint16_t* src = rows_[static_cast<std::size_t>(r)].data();
      std::uint16_t mul = static_cast<std::uint16_t>(p_ - val);
      std::uint16_t* dst = v.data();
      for (std::size_t j = c; j < n_; ++j) dst[j] = static_cast<std::uint16_t>(dst[j] + mul * src[j]);
      if (++steps >= axpy_cap_) {
        normalize(v);
        steps = 0;
      }
    }
    normalize(v);
    for (auto x : v)
      if (x != 0) return false;
    return true;
  }

  /// Reduce and insert; true when the rank grew.
  bool insert(std::vector<std::uint16_t> v) {
    if (reduce(v)) return false;
    std::size_t piv = 0;
    while (v[piv] == 0) ++piv;
    std::uint32_t inv =
        static_cast<std::uint32_t>(exactalg::inverse_unit(static_cast<std::int64_t>(v[piv]), p_));
    for (std::size_t j = piv; j < n_; ++j)
      v[j] = static_cast<std::uint16_t>((v[j] * inv) % p_);
    row_of_pivot_[piv] = static_cast<long>(rows_.size());
    pivot_of_row_.push_back(piv);
    rows_.push_back(std::move(v));
    return true;
  }

  /// Back-eliminate later pivots from every row (full reduced echelon form).
  void to_rref() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto& row = rows_[r];
      std::uint32_t steps = 0;
      for (std::size_t c = pivot_of_row_[r] + 1; c < n_; ++c) {
        std::uint32_t val = row[c] % p_;
        if (val == 0) continue;
        long rr = row_of_pivot_[c];
        if (rr < 0 || static_cast<std::size_t>(rr) == r) continue;
        const std::uint16_t* src = rows_[static_cast<std::size_t>(rr)].data();
        std::uint16_t mul = static_cast<std::uint16_t>(p_ - val);
        for (std::size_t j = c; j < n_; ++j)
          row[j] = static_cast<std::uint16_t>(row[j] + mul * src[j]);
        if (++steps >= axpy_cap_) {
          normalize(row);
          steps = 0;
        }
      }
      normalize(row);
    }
  }

 private:
  std::uint32_t p_;
  std::size_t n_;
  std::uint32_t axpy_cap_;
  std::vector<std::vector<std::uint16_t>> rows_;
  std::vector<long> row_of_pivot_;
  std::vector<std::size_t> pivot_of_row_;
};

// --- linear operators -------------------------------------------------------

using Vec16 = std::vector<std::uint16_t>;
using VecI = std::vector<std::int64_t>;

inline Vec16 to_vec16(const VecI& v, std::int64_t p) {
  Vec16 out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = static_cast<std::uint16_t>(ResidueMatrix::canonical(v[i], p));
  return out;
}

inline VecI to_veci(const Vec16& v) { return VecI(v.begin(), v.end()); }

/// A generator acting on the ambient space; inputs are normalized (< p).
class LinearOp {
 public:
  virtual ~LinearOp() = default;
  virtual void apply(const Vec16& in, Vec16& out) const = 0;
  virtual void apply_transposed(const Vec16& in, Vec16& out) const = 0;

  /// Image of the i-th basis vector; overridden where it is much cheaper
  /// than a full apply.
  virtual void apply_unit(std::size_t i, Vec16& out) const {
    Vec16 e(dim_hint(), 0);
    e[i] = 1;
    apply(e, out);
  }
  virtual std::size_t dim_hint() const = 0;
};

class MatrixOp final : public LinearOp {
 public:
  MatrixOp(std::vector<VecI> m, std::int64_t p) : p_(p) {
    n_ = m.size();
    a_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        a_[i * n_ + j] = static_cast<std::uint16_t>(ResidueMatrix::canonical(m[i][j], p));
  }

  void apply(const Vec16& in, Vec16& out) const override {
    out.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t acc = 0;
      const std::uint16_t* row = a_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) acc += static_cast<std::uint64_t>(row[j]) * in[j];
      out[i] = static_cast<std::uint16_t>(acc % p_);
    }
  }

  void apply_transposed(const Vec16& in, Vec16& out) const override {
    out.assign(n_, 0);
    std::vector<std::uint64_t> acc(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      if (in[i] == 0) continue;
      const std::uint16_t* row = a_.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) acc[j] += static_cast<std::uint64_t>(in[i]) * row[j];
    }
    for (std::size_t j = 0; j < n_; ++j) out[j] = static_cast<std::uint16_t>(acc[j] % p_);
  }

  void apply_unit(std::size_t c, Vec16& out) const override {
    out.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) out[i] = a_[i * n_ + c];
  }

  std::size_t dim_hint() const override { return n_; }

 private:
  std::size_t n_;
  std::int64_t p_;
  std::vector<std::uint16_t> a_;
};

/// Diagonal action on V (x) V realized without materializing the square
/// matrix: W |-> B W tB on m x m matrix coordinates.
class TensorSquareOp final : public LinearOp {
 public:
  TensorSquareOp(std::vector<VecI> base, std::int64_t p, bool wedge)
      : p_(p), m_(base.size()), wedge_(wedge) {
    b_.assign(m_ * m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        b_[i * m_ + j] =
            static_cast<std::int64_t>(ResidueMatrix::canonical(base[i][j], p));
    if (wedge_) {
      pair_index_.assign(m_ * m_, 0);
      for (std::size_t i = 0, k = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j, ++k) pair_index_[i * m_ + j] = k;
    }
  }

  std::size_t dim() const { return wedge_ ? m_ * (m_ - 1) / 2 : m_ * m_; }
  std::size_t dim_hint() const override { return dim(); }

  void apply(const Vec16& in, Vec16& out) const override { conjugate(in, out, false); }
  void apply_transposed(const Vec16& in, Vec16& out) const override { conjugate(in, out, true); }

  /// (B (x) B) e_(a,b) is the outer product of two base columns; for the
  /// wedge, the image of e_a ^ e_b is col_a ^ col_b.
  void apply_unit(std::size_t k, Vec16& out) const override {
    std::size_t a, b;
    if (!wedge_) {
      a = k / m_;
      b = k % m_;
    } else {
      a = 0;
      std::size_t row_len = m_ - 1, kk = k;
      while (kk >= row_len) {
        kk -= row_len;
        --row_len;
        ++a;
      }
      b = a + 1 + kk;
    }
    out.assign(dim(), 0);
    if (!wedge_) {
      for (std::size_t i = 0; i < m_; ++i) {
        std::int64_t ci = b_[i * m_ + a];
        if (ci == 0) continue;
        for (std::size_t j = 0; j < m_; ++j)
          out[i * m_ + j] =
              static_cast<std::uint16_t>(ci * b_[j * m_ + b] % p_);
      }
    } else {
      for (std::size_t i = 0, idx = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j, ++idx) {
          std::int64_t v = b_[i * m_ + a] * b_[j * m_ + b] - b_[j * m_ + a] * b_[i * m_ + b];
          out[idx] = static_cast<std::uint16_t>(ResidueMatrix::canonical(v, p_));
        }
    }
  }

 private:
  // out = B W tB (or tB W B when transposed), with W unpacked from `in`.
  void conjugate(const Vec16& in, Vec16& out, bool transposed) const {
    std::vector<std::int64_t> w(m_ * m_, 0);
    if (!wedge_) {
      for (std::size_t i = 0; i < m_ * m_; ++i) w[i] = in[i];
    } else {
      for (std::size_t i = 0, k = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j, ++k) {
          w[i * m_ + j] = in[k];
          w[j * m_ + i] = ResidueMatrix::canonical(-static_cast<std::int64_t>(in[k]), p_);
        }
    }
    auto b_at = [&](std::size_t i, std::size_t j) {
      return transposed ? b_[j * m_ + i] : b_[i * m_ + j];
    };
    // t1 = B W
    std::vector<std::int64_t> t1(m_ * m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) {
        std::int64_t c = b_at(i, k);
        if (c == 0) continue;
        const std::int64_t* wr = w.data() + k * m_;
        std::int64_t* tr = t1.data() + i * m_;
        for (std::size_t j = 0; j < m_; ++j) tr[j] += c * wr[j];
      }
    for (auto& v : t1) v %= p_;
    // t2 = t1 tB
    std::vector<std::int64_t> t2(m_ * m_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < m_; ++k) {
        std::int64_t c = t1[i * m_ + k];
        if (c == 0) continue;
        for (std::size_t j = 0; j < m_; ++j) t2[i * m_ + j] += c * b_at(j, k);
      }
    if (!wedge_) {
      out.assign(m_ * m_, 0);
      for (std::size_t i = 0; i < m_ * m_; ++i)
        out[i] = static_cast<std::uint16_t>(ResidueMatrix::canonical(t2[i], p_));
    } else {
      out.assign(dim(), 0);
      for (std::size_t i = 0, k = 0; i < m_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j, ++k)
          out[k] = static_cast<std::uint16_t>(ResidueMatrix::canonical(t2[i * m_ + j], p_));
    }
  }

  std::int64_t p_;
  std::size_t m_;
  bool wedge_;
  std::vector<std::int64_t> b_;
  std::vector<std::size_t> pair_index_;
};

// --- action specification ----------------------------------------------------

enum class GroupVariant { GL, SL };

struct Named {
  std::string name;
  VecI vector;
};

/// A finite F_p-module with designated group-generator actions: the
/// generator set is {Id + e_ij (i != j), D_g} (GL) or the elementaries alone
/// (SL), realized per space.
struct ActionSpec {
  std::string space;
  std::int64_t p = 5;
  std::size_t dim = 0;
  std::vector<std::shared_ptr<const LinearOp>> generators;
  std::vector<Named> candidates;        // the listed quotient generators
  std::vector<Named> dual_functionals;  // known invariant functionals
};

/// Smallest subspace containing {(s-1)v : v basis, s generator} and stable
/// under every generator: fixed-point iteration on an echelon basis, with a
/// sound early exit once rank reaches dim - #(exact invariant functionals).
inline FastEchelon augmentation_closure_fast(const ActionSpec& spec) {
  FastEchelon ech(spec.p, spec.dim);

  // Exactly invariant functionals bound the closure rank from above.
  std::size_t certified = 0;
  {
    FpSubspace span(spec.p, spec.dim);
    Vec16 img;
    for (const auto& f : spec.dual_functionals) {
      Vec16 fv = to_vec16(f.vector, spec.p);
      bool invariant = true;
      for (const auto& gen : spec.generators) {
        gen->apply_transposed(fv, img);
        if (img != fv) {
          invariant = false;
          break;
        }
      }
      if (invariant && span.insert(f.vector)) ++certified;
    }
  }
  const std::size_t target = spec.dim - certified;

  std::deque<std::pair<std::size_t, std::size_t>> work;  // (row, generator)
  Vec16 img;
  for (std::size_t i = 0; i < spec.dim && ech.rank() < target; ++i) {
    for (std::size_t s = 0; s < spec.generators.size() && ech.rank() < target; ++s) {
      spec.generators[s]->apply_unit(i, img);
      img[i] = static_cast<std::uint16_t>((img[i] + spec.p - 1) % spec.p);
      if (ech.insert(img))
        for (std::size_t t = 0; t < spec.generators.size(); ++t)
          work.emplace_back(ech.rank() - 1, t);
    }
  }
  while (!work.empty() && ech.rank() < target) {
    auto [r, s] = work.front();
    work.pop_front();
    Vec16 v = ech.row(r);
    spec.generators[s]->apply(v, img);
    for (std::size_t j = 0; j < spec.dim; ++j)
      img[j] = static_cast<std::uint16_t>((img[j] + spec.p - v[j]) % spec.p);
    if (ech.insert(img))
      for (std::size_t t = 0; t < spec.generators.size(); ++t)
        work.emplace_back(ech.rank() - 1, t);
  }
  return ech;
}

inline FpSubspace to_subspace(FastEchelon ech) {
  ech.to_rref();
  FpSubspace s(ech.p(), ech.ambient());
  for (std::size_t r = 0; r < ech.rank(); ++r) s.insert(to_veci(ech.row(r)));
  return s;
}

/// Public form of the closure, as a reduced-echelon subspace.
inline FpSubspace augmentation_closure(const ActionSpec& spec) {
  return to_subspace(augmentation_closure_fast(spec));
}

struct CoinvariantReport {
  std::string space;
  std::int64_t p = 0;
  std::size_t ambient = 0;
  FpSubspace augmentation{5, 1};
  std::size_t quotient_dim = 0;
  std::vector<std::string> candidate_names;
  std::vector<VecI> candidate_images;  // echelon quotient coordinates
  bool generators_span = false;
};

namespace detail {

/// Quotient coordinates: reduce, then read the non-pivot positions.
inline VecI quotient_coords(const FastEchelon& ech, const VecI& v,
                            const std::vector<std::size_t>& free_cols, std::int64_t p) {
  Vec16 w = to_vec16(v, p);
  ech.reduce(w);
  VecI out(free_cols.size());
  for (std::size_t i = 0; i < free_cols.size(); ++i) out[i] = w[free_cols[i]];
  return out;
}

}  // namespace detail

inline CoinvariantReport run_coinvariants(const ActionSpec& spec) {
  FastEchelon ech = augmentation_closure_fast(spec);
  std::vector<bool> is_pivot(spec.dim, false);
  for (auto pv : ech.pivots()) is_pivot[pv] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < spec.dim; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  CoinvariantReport rep;
  rep.space = spec.space;
  rep.p = spec.p;
  rep.ambient = spec.dim;
  rep.quotient_dim = spec.dim - ech.rank();
  for (const auto& c : spec.candidates) {
    rep.candidate_names.push_back(c.name);
    rep.candidate_images.push_back(detail::quotient_coords(ech, c.vector, free_cols, spec.p));
  }
  rep.generators_span =
      exactalg::rank_of(rep.candidate_images, rep.quotient_dim, spec.p) == rep.quotient_dim;
  rep.augmentation = to_subspace(std::move(ech));
  return rep;
}

}  // namespace torelli::coinv
