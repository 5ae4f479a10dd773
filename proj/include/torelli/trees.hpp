#pragma once

#include "torelli/fp_linear.hpp"
#include "torelli/multilinear.hpp"

#include <array>
#include <optional>
#include <utility>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torelli::trees {

using exactalg::FpSubspace;
using exactalg::ResidueMatrix;
using multilinear::Ext3Context;
using multilinear::Ext3Vector;

/// The degree-2 algebra of labeled uni-trivalent trees: H-shaped trees
/// T(w,x | y,z) with basis labels, modulo
///   AS-left   T(w,x|y,z) + T(x,w|y,z)
///   AS-right  T(w,x|y,z) + T(w,x|z,y)
///   swap      T(w,x|y,z) - T(y,z|w,x)
///   IHX       T(w,x|y,z) - T(w,z|y,x) - T(x,z|w,y)
/// The first three are handled by signed-orbit canonicalization; IHX spans an
/// explicit relation subspace. Relation data is built once per (g, p) and
/// shared immutably.
class TreeContext {
 public:
  TreeContext(std::size_t g, std::int64_t p, Conventions conv = {}, bool with_ihx = true)
      : g_(g), p_(p), conv_(conv), n_(2 * g) {
    if (g < 2) throw std::invalid_argument("TreeContext: genus >= 2 required");
    if (!exactalg::is_prime(p)) throw std::invalid_argument("TreeContext: p must be prime");

    // Enumerate signed orbits of 4-tuples.
    orbit_of_.assign(n_ * n_ * n_ * n_, -1);
    sign_of_.assign(n_ * n_ * n_ * n_, 0);
    for (std::size_t w = 0; w < n_; ++w)
      for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y)
          for (std::size_t z = 0; z < n_; ++z) {
            std::size_t id = flat(w, x, y, z);
            if (sign_of_[id] != 0 || orbit_of_[id] >= 0) continue;
            mark_orbit({w, x, y, z});
          }

    // Relation subspace: the IHX instances on all basis tuples.
    relations_ = FpSubspace(p_, reps_.size());
    if (with_ihx) {
      std::vector<std::int64_t> rel(reps_.size());
      for (std::size_t w = 0; w < n_; ++w)
        for (std::size_t x = 0; x < n_; ++x)
          for (std::size_t y = 0; y < n_; ++y)
            for (std::size_t z = 0; z < n_; ++z) {
              std::fill(rel.begin(), rel.end(), 0);
              accumulate(rel, {w, x, y, z}, 1);
              accumulate(rel, {w, z, y, x}, -1);
              accumulate(rel, {x, z, w, y}, -1);
              relations_->insert(rel);
            }
    }
    for (std::size_t r = 0; r < reps_.size(); ++r)
      if (!pivot_set(r)) quotient_cols_.push_back(r);

    // d1 and d2 as functionals on orbit representatives.
    d1_.resize(reps_.size());
    d2_.resize(reps_.size());
    for (std::size_t r = 0; r < reps_.size(); ++r) {
      const auto& t = reps_[r];
      auto om = [&](std::size_t u, std::size_t v) { return multilinear::omega_label(u, v, conv_); };
      auto vp = [&](std::size_t u, std::size_t v) { return multilinear::varpi_label(u, v); };
      d1_[r] = ResidueMatrix::canonical(
          2 * om(t[0], t[1]) * om(t[2], t[3]) + om(t[0], t[2]) * om(t[1], t[3]) -
              om(t[0], t[3]) * om(t[1], t[2]),
          p_);
      d2_[r] = ResidueMatrix::canonical(
          vp(t[0], t[2]) * vp(t[1], t[3]) - vp(t[0], t[3]) * vp(t[1], t[2]), p_);
    }
  }

  std::size_t genus() const { return g_; }
  std::int64_t p() const { return p_; }
  const Conventions& conventions() const { return conv_; }
  std::size_t orbit_dim() const { return reps_.size(); }
  std::size_t algebra_dim() const { return reps_.size() - relations_->rank(); }
  const FpSubspace& relation_subspace() const { return *relations_; }
  const std::array<std::size_t, 4>& rep(std::size_t r) const { return reps_[r]; }
  const std::vector<std::size_t>& quotient_cols() const { return quotient_cols_; }

  /// Add coeff * T(tuple) to a raw orbit-coordinate vector.
  void accumulate(std::vector<std::int64_t>& v, std::array<std::size_t, 4> t,
                  std::int64_t coeff) const {
    std::size_t id = flat(t[0], t[1], t[2], t[3]);
    if (sign_of_[id] == 0) return;  // tuple is zero in the algebra
    std::size_t r = static_cast<std::size_t>(orbit_of_[id]);
    v[r] = ResidueMatrix::canonical(v[r] + coeff * sign_of_[id], p_);
  }

  /// Reduce raw orbit coordinates modulo the relation subspace.
  std::vector<std::int64_t> reduce(std::vector<std::int64_t> v) const {
    relations_->reduce(v);
    return v;
  }

  std::int64_t eval_d1(const std::vector<std::int64_t>& coords) const { return dot(d1_, coords); }
  std::int64_t eval_d2(const std::vector<std::int64_t>& coords) const { return dot(d2_, coords); }
  const std::vector<std::int64_t>& d1_vector() const { return d1_; }
  const std::vector<std::int64_t>& d2_vector() const { return d2_; }

 private:
  std::size_t flat(std::size_t w, std::size_t x, std::size_t y, std::size_t z) const {
    return ((w * n_ + x) * n_ + y) * n_ + z;
  }

  bool pivot_set(std::size_t col) const {
    for (auto pv : relations_->pivots())
      if (pv == col) return true;
    return false;
  }

  void mark_orbit(std::array<std::size_t, 4> t) {
    // The eight signed images under AS-left, AS-right and the vertex swap.
    std::array<std::pair<std::array<std::size_t, 4>, int>, 8> var{{
        {{t[0], t[1], t[2], t[3]}, 1},
        {{t[1], t[0], t[2], t[3]}, -1},
        {{t[0], t[1], t[3], t[2]}, -1},
        {{t[1], t[0], t[3], t[2]}, 1},
        {{t[2], t[3], t[0], t[1]}, 1},
        {{t[3], t[2], t[0], t[1]}, -1},
        {{t[2], t[3], t[1], t[0]}, -1},
        {{t[3], t[2], t[1], t[0]}, 1},
    }};
    // Zero detection: the same tuple reachable with both signs.
    bool zero = false;
    for (std::size_t i = 0; i < 8 && !zero; ++i)
      for (std::size_t j = i + 1; j < 8; ++j)
        if (var[i].first == var[j].first && var[i].second != var[j].second) {
          zero = true;
          break;
        }
    if (zero) {
      for (auto& [tt, s] : var) sign_of_[flat(tt[0], tt[1], tt[2], tt[3])] = 0;
      return;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < 8; ++i)
      if (var[i].first < var[best].first) best = i;
    long rep_idx = static_cast<long>(reps_.size());
    reps_.push_back(var[best].first);
    int base = var[best].second;
    for (auto& [tt, s] : var) {
      std::size_t id = flat(tt[0], tt[1], tt[2], tt[3]);
      orbit_of_[id] = rep_idx;
      sign_of_[id] = s * base;  // value of T(tt) in terms of T(rep)
    }
  }

  std::int64_t dot(const std::vector<std::int64_t>& f, const std::vector<std::int64_t>& v) const {
    if (f.size() != v.size()) throw std::invalid_argument("TreeContext: coordinate size mismatch");
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) acc = (acc + f[i] * v[i]) % p_;
    return ResidueMatrix::canonical(acc, p_);
  }

  std::size_t g_;
  std::int64_t p_;
  Conventions conv_;
  std::size_t n_;
  std::vector<std::array<std::size_t, 4>> reps_;
  std::vector<long> orbit_of_;
  std::vector<int> sign_of_;
  std::optional<FpSubspace> relations_;
  std::vector<std::size_t> quotient_cols_;
  std::vector<std::int64_t> d1_, d2_;
};

/// Element of the degree-2 tree algebra in canonical (relation-reduced)
/// orbit coordinates.
struct TreeH2 {
  std::vector<std::int64_t> coords;

  bool is_zero() const {
    for (auto c : coords)
      if (c != 0) return false;
    return true;
  }
  bool operator==(const TreeH2&) const = default;
};

struct LabeledTerm {
  std::array<std::size_t, 4> tuple;
  std::int64_t coeff;
};

inline TreeH2 canonicalize(const TreeContext& ctx, const std::vector<LabeledTerm>& terms) {
  std::vector<std::int64_t> raw(ctx.orbit_dim(), 0);
  for (const auto& t : terms) ctx.accumulate(raw, t.tuple, t.coeff);
  return {ctx.reduce(std::move(raw))};
}

inline std::int64_t d1(const TreeContext& ctx, const TreeH2& t) { return ctx.eval_d1(t.coords); }
inline std::int64_t d2(const TreeContext& ctx, const TreeH2& t) { return ctx.eval_d2(t.coords); }

/// Welding bracket of two tripods (elements of the exterior cube read as
/// trees with cyclically ordered leaves):
///   [t1, t2] = s_w * sum_{i,j} omega(u_i, v_j) T(u_{i+1}, u_{i+2} | v_{j+1}, v_{j+2}).
inline TreeH2 bracket(const TreeContext& ctx, const Ext3Context& ext, const Ext3Vector& t1,
                      const Ext3Vector& t2) {
  if (ext.genus() != ctx.genus() || ext.p() != ctx.p() ||
      !(ext.conventions() == ctx.conventions()))
    throw std::invalid_argument("bracket: mismatched contexts");
  std::vector<std::int64_t> raw(ctx.orbit_dim(), 0);
  const int sw = ctx.conventions().weld_sign;
  for (std::size_t ru = 0; ru < ext.dim(); ++ru) {
    std::int64_t cu = t1.coords[ru];
    if (cu == 0) continue;
    const auto& u = ext.triple(ru);
    for (std::size_t rv = 0; rv < ext.dim(); ++rv) {
      std::int64_t cv = t2.coords[rv];
      if (cv == 0) continue;
      const auto& v = ext.triple(rv);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          int w = multilinear::omega_label(u[i], v[j], ctx.conventions());
          if (w == 0) continue;
          std::int64_t coeff = ResidueMatrix::canonical(sw * w * cu % ctx.p() * cv, ctx.p());
          ctx.accumulate(raw,
                         {u[(i + 1) % 3], u[(i + 2) % 3], v[(j + 1) % 3], v[(j + 2) % 3]}, coeff);
        }
    }
  }
  return {ctx.reduce(std::move(raw))};
}

/// Matrix of the induced GL action on the algebra quotient, in the
/// non-pivot (echelon complement) coordinates. rho is the 2g x 2g action on
/// H_p in interleaved indexing.
inline std::vector<std::vector<std::int64_t>> a2_quotient_action(const TreeContext& ctx,
                                                                 const ResidueMatrix& rho) {
  const auto& cols = ctx.quotient_cols();
  const std::size_t q = cols.size(), n = rho.rows();
  std::vector<std::vector<std::int64_t>> m(q, std::vector<std::int64_t>(q, 0));
  for (std::size_t c = 0; c < q; ++c) {
    const auto& t = ctx.rep(cols[c]);
    std::vector<std::int64_t> raw(ctx.orbit_dim(), 0);
    for (std::size_t i0 = 0; i0 < n; ++i0) {
      std::int64_t c0 = rho.at(i0, t[0]);
      if (c0 == 0) continue;
      for (std::size_t i1 = 0; i1 < n; ++i1) {
        std::int64_t c1 = rho.at(i1, t[1]);
        if (c1 == 0) continue;
        for (std::size_t i2 = 0; i2 < n; ++i2) {
          std::int64_t c2 = rho.at(i2, t[2]);
          if (c2 == 0) continue;
          for (std::size_t i3 = 0; i3 < n; ++i3) {
            std::int64_t c3 = rho.at(i3, t[3]);
            if (c3 == 0) continue;
            std::int64_t coeff = c0 * c1 % ctx.p() * c2 % ctx.p() * c3 % ctx.p();
            ctx.accumulate(raw, {i0, i1, i2, i3}, coeff);
          }
        }
      }
    }
    auto red = ctx.reduce(std::move(raw));
    for (std::size_t r = 0; r < q; ++r) m[r][c] = red[cols[r]];
  }
  return m;
}

}  // namespace torelli::trees
