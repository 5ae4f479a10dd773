#pragma once

#include "torelli/conventions.hpp"
#include "torelli/fp_linear.hpp"
#include "torelli/residue.hpp"
#include "torelli/symplectic.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace torelli::multilinear {

using exactalg::ResidueMatrix;
using symplectic::SpLieElement;

/// H_p basis labels in the interleaved order a_1 < b_1 < a_2 < ... < b_g:
/// a_i <-> 2(i-1), b_i <-> 2(i-1)+1 (0-based).
inline std::size_t label_a(std::size_t i) { return 2 * i; }
inline std::size_t label_b(std::size_t i) { return 2 * i + 1; }
inline bool label_is_a(std::size_t l) { return l % 2 == 0; }
inline std::size_t label_index(std::size_t l) { return l / 2; }

/// omega on basis labels, as a plain integer in {-1, 0, 1} times omega_sign.
inline int omega_label(std::size_t x, std::size_t y, const Conventions& conv) {
  if (label_index(x) != label_index(y)) return 0;
  if (label_is_a(x) && !label_is_a(y)) return conv.omega_sign;
  if (!label_is_a(x) && label_is_a(y)) return -conv.omega_sign;
  return 0;
}

/// The symmetric form with matrix ( 0 Id ; Id 0 ): 1 on (a_i, b_i) pairs.
inline int varpi_label(std::size_t x, std::size_t y) {
  return (label_index(x) == label_index(y) && label_is_a(x) != label_is_a(y)) ? 1 : 0;
}

/// Immutable per-(g, p, conventions) evaluation context for the degree-3
/// exterior power: basis triples, ranks and Lagrangian typing.
class Ext3Context {
 public:
  Ext3Context(std::size_t g, std::int64_t p, Conventions conv = {})
      : g_(g), p_(p), conv_(conv) {
    if (g < 2) throw std::invalid_argument("Ext3Context: genus >= 2 required");
    if (!exactalg::is_prime(p)) throw std::invalid_argument("Ext3Context: p must be prime");
    const std::size_t n = 2 * g;
    rank_.assign(n * n * n, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          rank_[(i * n + j) * n + k] = static_cast<long>(triples_.size());
          triples_.push_back({i, j, k});
        }
  }

  std::size_t genus() const { return g_; }
  std::int64_t p() const { return p_; }
  const Conventions& conventions() const { return conv_; }
  std::size_t dim() const { return triples_.size(); }
  const std::array<std::size_t, 3>& triple(std::size_t r) const { return triples_[r]; }

  /// Rank of a strictly increasing triple.
  std::size_t rank(std::size_t i, std::size_t j, std::size_t k) const {
    long r = rank_[(i * 2 * g_ + j) * 2 * g_ + k];
    if (r < 0) throw std::invalid_argument("Ext3Context: triple not increasing");
    return static_cast<std::size_t>(r);
  }

  /// Canonicalize an arbitrary wedge of labels; sign of the sorting
  /// permutation, zero on repeated labels. Returns false when zero.
  bool canonical(std::array<std::size_t, 3> t, std::size_t& r, int& sign) const {
    sign = 1;
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t[1] > t[2]) { std::swap(t[1], t[2]); sign = -sign; }
    if (t[0] > t[1]) { std::swap(t[0], t[1]); sign = -sign; }
    if (t[0] == t[1] || t[1] == t[2]) return false;
    r = rank(t[0], t[1], t[2]);
    return true;
  }

  /// Number of a-type labels in a basis triple: 3 = W_A, 0 = W_B,
  /// 2 = W_{A^2B}, 1 = W_{B^2A}.
  int a_count(std::size_t r) const {
    int c = 0;
    for (auto l : triples_[r]) c += label_is_a(l) ? 1 : 0;
    return c;
  }

 private:
  std::size_t g_;
  std::int64_t p_;
  Conventions conv_;
  std::vector<std::array<std::size_t, 3>> triples_;
  std::vector<long> rank_;
};

/// Element of the third exterior power of H_p in canonical coordinates.
struct Ext3Vector {
  std::vector<std::int64_t> coords;

  static Ext3Vector zero(const Ext3Context& ctx) { return {std::vector<std::int64_t>(ctx.dim(), 0)}; }

  static Ext3Vector wedge(const Ext3Context& ctx, std::size_t x, std::size_t y, std::size_t z,
                          std::int64_t coeff = 1) {
    Ext3Vector v = zero(ctx);
    std::size_t r;
    int sign;
    if (ctx.canonical({x, y, z}, r, sign))
      v.coords[r] = ResidueMatrix::canonical(coeff * sign, ctx.p());
    return v;
  }

  Ext3Vector& add(const Ext3Context& ctx, const Ext3Vector& o, std::int64_t c = 1) {
    for (std::size_t i = 0; i < coords.size(); ++i)
      coords[i] = ResidueMatrix::canonical(coords[i] + c * o.coords[i], ctx.p());
    return *this;
  }

  bool is_zero() const {
    for (auto v : coords)
      if (v != 0) return false;
    return true;
  }
};

/// omega extended bilinearly to coordinate vectors on the H_p basis.
inline std::int64_t omega(const Ext3Context& ctx, const std::vector<std::int64_t>& u,
                          const std::vector<std::int64_t>& v) {
  if (u.size() != 2 * ctx.genus() || v.size() != 2 * ctx.genus())
    throw std::invalid_argument("omega: vector size mismatch");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < ctx.genus(); ++i) {
    acc += ctx.conventions().omega_sign *
           (u[label_a(i)] * v[label_b(i)] - u[label_b(i)] * v[label_a(i)]);
    acc %= ctx.p();
  }
  return ResidueMatrix::canonical(acc, ctx.p());
}

/// C(x ^ y ^ z) = 2 [ omega(y,z) x + omega(z,x) y + omega(x,y) z ].
inline std::vector<std::int64_t> contract(const Ext3Context& ctx, const Ext3Vector& v) {
  std::vector<std::int64_t> out(2 * ctx.genus(), 0);
  const auto& conv = ctx.conventions();
  for (std::size_t r = 0; r < ctx.dim(); ++r) {
    std::int64_t c = v.coords[r];
    if (c == 0) continue;
    const auto& t = ctx.triple(r);
    const std::size_t x = t[0], y = t[1], z = t[2];
    out[x] += 2 * c * omega_label(y, z, conv);
    out[y] += 2 * c * omega_label(z, x, conv);
    out[z] += 2 * c * omega_label(x, y, conv);
  }
  for (auto& e : out) e = ResidueMatrix::canonical(e, ctx.p());
  return out;
}

enum class Part { A, B, A2B, B2A };

inline Ext3Vector project(const Ext3Context& ctx, const Ext3Vector& v, Part part) {
  Ext3Vector out = Ext3Vector::zero(ctx);
  for (std::size_t r = 0; r < ctx.dim(); ++r) {
    int ac = ctx.a_count(r);
    bool keep = (part == Part::A && ac == 3) || (part == Part::B && ac == 0) ||
                (part == Part::A2B && ac == 2) || (part == Part::B2A && ac == 1);
    if (keep) out.coords[r] = v.coords[r];
  }
  return out;
}

inline Ext3Vector pi_A(const Ext3Context& c, const Ext3Vector& v) { return project(c, v, Part::A); }
inline Ext3Vector pi_B(const Ext3Context& c, const Ext3Vector& v) { return project(c, v, Part::B); }
inline Ext3Vector pi_A2B(const Ext3Context& c, const Ext3Vector& v) { return project(c, v, Part::A2B); }
inline Ext3Vector pi_B2A(const Ext3Context& c, const Ext3Vector& v) { return project(c, v, Part::B2A); }

/// Theta on a pair of basis triples: determinant of the 3x3 pairing matrix
/// [omega(x_i, y_j)]; equal to the signed sum over S_3 (asserted in tests).
inline std::int64_t theta_basis(const Ext3Context& ctx, std::size_t rx, std::size_t ry) {
  const auto& a = ctx.triple(rx);
  const auto& b = ctx.triple(ry);
  const auto& conv = ctx.conventions();
  std::int64_t m[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = omega_label(a[i], b[j], conv);
  std::int64_t d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return ResidueMatrix::canonical(d, ctx.p());
}

inline std::int64_t theta_form(const Ext3Context& ctx, const Ext3Vector& x, const Ext3Vector& y) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < ctx.dim(); ++i) {
    if (x.coords[i] == 0) continue;
    for (std::size_t j = 0; j < ctx.dim(); ++j) {
      if (y.coords[j] == 0) continue;
      acc = (acc + x.coords[i] * y.coords[j] % ctx.p() * theta_basis(ctx, i, j)) % ctx.p();
    }
  }
  return ResidueMatrix::canonical(acc, ctx.p());
}

inline std::int64_t q_form(const Ext3Context& ctx, const Ext3Vector& x, const Ext3Vector& y) {
  return omega(ctx, contract(ctx, x), contract(ctx, y));
}

inline std::int64_t tJ_form(const Ext3Context& ctx, const Ext3Vector& x, const Ext3Vector& y) {
  return theta_form(ctx, pi_B(ctx, x), pi_A(ctx, y));
}

inline std::int64_t J_form(const Ext3Context& ctx, const Ext3Vector& x, const Ext3Vector& y) {
  return ResidueMatrix::canonical(-theta_form(ctx, pi_A(ctx, x), pi_B(ctx, y)), ctx.p());
}

// --- invariant bilinear forms on sp ----------------------------------------

inline std::int64_t trace_product(const ResidueMatrix& a, const ResidueMatrix& b) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + a.at(i, k) * b.at(k, i)) % a.modulus();
  return acc;
}

inline std::int64_t T1_form(const SpLieElement& x, const SpLieElement& y) {
  return trace_product(x.gl_block(), y.gl_block());
}

inline std::int64_t T2_form(const SpLieElement& x, const SpLieElement& y) {
  return (symplectic::trace_gl(x) * symplectic::trace_gl(y)) % x.modulus();
}

inline std::int64_t K_form(const SpLieElement& x, const SpLieElement& y) {
  return trace_product(x.a_block(), y.b_block());
}

inline std::int64_t tK_form(const SpLieElement& x, const SpLieElement& y) {
  return trace_product(x.b_block(), y.a_block());
}

// --- GL action on H_p and its exterior cube --------------------------------

/// Interleaved-basis action of G on H_p: a_j -> sum_i G_ij a_i and
/// b_j -> sum_i (tG^-1)_ij b_i.
inline ResidueMatrix h_action(const Ext3Context& ctx, const ResidueMatrix& gm) {
  const std::size_t g = ctx.genus();
  if (gm.rows() != g || gm.cols() != g) throw std::invalid_argument("h_action: G must be g x g");
  ResidueMatrix tginv = exactalg::inverse_mod(gm.transposed());
  ResidueMatrix rho(ctx.p(), 2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      rho.set(label_a(i), label_a(j), gm.at(i, j));
      rho.set(label_b(i), label_b(j), tginv.at(i, j));
    }
  return rho;
}

/// Dense matrix of the induced action on the canonical triple basis.
inline std::vector<std::vector<std::int64_t>> ext3_matrix(const Ext3Context& ctx,
                                                          const ResidueMatrix& rho) {
  const std::size_t n = 2 * ctx.genus(), dim = ctx.dim();
  std::vector<std::vector<std::int64_t>> m(dim, std::vector<std::int64_t>(dim, 0));
  for (std::size_t r = 0; r < dim; ++r) {
    const auto& t = ctx.triple(r);
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t ci = rho.at(i, t[0]);
      if (ci == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t cj = rho.at(j, t[1]);
        if (cj == 0) continue;
        for (std::size_t k = 0; k < n; ++k) {
          std::int64_t ck = rho.at(k, t[2]);
          if (ck == 0) continue;
          std::size_t rr;
          int sign;
          if (!ctx.canonical({i, j, k}, rr, sign)) continue;
          m[rr][r] = ResidueMatrix::canonical(m[rr][r] + sign * ci * cj % ctx.p() * ck, ctx.p());
        }
      }
    }
  }
  return m;
}

inline Ext3Vector apply_matrix(const Ext3Context& ctx,
                               const std::vector<std::vector<std::int64_t>>& m,
                               const Ext3Vector& v) {
  Ext3Vector out = Ext3Vector::zero(ctx);
  for (std::size_t c = 0; c < ctx.dim(); ++c) {
    if (v.coords[c] == 0) continue;
    for (std::size_t r = 0; r < ctx.dim(); ++r)
      out.coords[r] = ResidueMatrix::canonical(out.coords[r] + m[r][c] * v.coords[c], ctx.p());
  }
  return out;
}

}  // namespace torelli::multilinear
