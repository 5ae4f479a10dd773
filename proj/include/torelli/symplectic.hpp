#pragma once

#include "torelli/conventions.hpp"
#include "torelli/residue.hpp"
#include "torelli/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace torelli::symplectic {

using exactalg::IntMatrix;
using exactalg::ResidueMatrix;

/// Matrix of the symplectic form in the ordered basis a_1..a_g, b_1..b_g:
/// omega(a_i, b_j) = s * delta_ij, zero on like pairs.
inline ResidueMatrix omega_matrix(std::size_t g, std::int64_t m, const Conventions& conv = {}) {
  ResidueMatrix w(m, 2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    w.set(i, g + i, conv.omega_sign);
    w.set(g + i, i, -conv.omega_sign);
  }
  return w;
}

inline bool is_symplectic(const ResidueMatrix& x, std::size_t g, const Conventions& conv = {}) {
  if (x.rows() != 2 * g || x.cols() != 2 * g) return false;
  ResidueMatrix w = omega_matrix(g, x.modulus(), conv);
  return x.transposed() * w * x == w;
}

/// Element of Sp_2g(Z/m), stored with its symplectic certificate checked at
/// construction. Blocks E, F, G, H refer to the a/b Lagrangian splitting:
///   X = ( E F ; G H ).
class SympElement {
 public:
  SympElement(std::size_t genus, ResidueMatrix body, const Conventions& conv = {})
      : g_(genus), body_(std::move(body)) {
    if (!is_symplectic(body_, g_, conv))
      throw std::invalid_argument("SympElement: matrix is not symplectic");
  }

  std::size_t genus() const { return g_; }
  std::int64_t modulus() const { return body_.modulus(); }
  const ResidueMatrix& body() const { return body_; }

  ResidueMatrix block_E() const { return body_.block(0, 0, g_, g_); }
  ResidueMatrix block_F() const { return body_.block(0, g_, g_, g_); }
  ResidueMatrix block_G() const { return body_.block(g_, 0, g_, g_); }
  ResidueMatrix block_H() const { return body_.block(g_, g_, g_, g_); }

  SympElement operator*(const SympElement& o) const {
    if (g_ != o.g_) throw std::invalid_argument("SympElement: genus mismatch");
    return SympElement(g_, body_ * o.body_);
  }

  /// X^-1 = -Omega tX Omega, exact for symplectic matrices.
  SympElement inverse() const {
    ResidueMatrix w = omega_matrix(g_, body_.modulus());
    ResidueMatrix zero(body_.modulus(), 2 * g_, 2 * g_);
    return SympElement(g_, (zero - w) * body_.transposed() * w);
  }

  bool operator==(const SympElement& o) const { return g_ == o.g_ && body_ == o.body_; }

 private:
  std::size_t g_;
  ResidueMatrix body_;
};

inline bool is_level(const SympElement& x, std::int64_t d) {
  if (d < 2 || x.modulus() % d != 0) throw std::invalid_argument("is_level: d must divide the modulus");
  const std::size_t n = 2 * x.genus();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if ((x.body().at(i, j) - (i == j ? 1 : 0)) % d != 0) return false;
  return true;
}

/// Element of the symplectic Lie algebra over Z/m in block coordinates
/// (gl | a | b) for ( alpha beta ; gamma -t(alpha) ), beta and gamma symmetric.
class SpLieElement {
 public:
  SpLieElement(std::size_t genus, ResidueMatrix gl, ResidueMatrix a, ResidueMatrix b)
      : g_(genus), gl_(std::move(gl)), a_(std::move(a)), b_(std::move(b)) {
    check_shape(gl_);
    check_shape(a_);
    check_shape(b_);
    gl_.check_modulus(a_);
    gl_.check_modulus(b_);
    if (!(a_ == a_.transposed()) || !(b_ == b_.transposed()))
      throw std::invalid_argument("SpLieElement: a/b blocks must be symmetric");
  }

  static SpLieElement zero(std::size_t g, std::int64_t m) {
    return SpLieElement(g, ResidueMatrix(m, g, g), ResidueMatrix(m, g, g), ResidueMatrix(m, g, g));
  }

  std::size_t genus() const { return g_; }
  std::int64_t modulus() const { return gl_.modulus(); }
  const ResidueMatrix& gl_block() const { return gl_; }
  const ResidueMatrix& a_block() const { return a_; }
  const ResidueMatrix& b_block() const { return b_; }

  SpLieElement operator+(const SpLieElement& o) const {
    return SpLieElement(g_, gl_ + o.gl_, a_ + o.a_, b_ + o.b_);
  }

  bool operator==(const SpLieElement& o) const {
    return g_ == o.g_ && gl_ == o.gl_ && a_ == o.a_ && b_ == o.b_;
  }

 private:
  void check_shape(const ResidueMatrix& m) const {
    if (m.rows() != g_ || m.cols() != g_) throw std::invalid_argument("SpLieElement: block shape");
  }

  std::size_t g_;
  ResidueMatrix gl_, a_, b_;
};

inline ResidueMatrix pi_gl(const SpLieElement& l) { return l.gl_block(); }

inline std::int64_t trace_gl(const SpLieElement& l) {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < l.genus(); ++i) t += l.gl_block().at(i, i);
  return t % l.modulus();
}

/// alpha: level-d element known mod a multiple of d^2 |-> (X - Id)/d mod d,
/// repackaged into (gl | a | b) blocks.
inline SpLieElement alpha(const SympElement& x, std::int64_t d) {
  if (x.modulus() % (d * d) != 0)
    throw std::invalid_argument("alpha: modulus must be divisible by d^2");
  if (!is_level(x, d)) throw std::invalid_argument("alpha: element is not level-d");
  const std::size_t g = x.genus();
  ResidueMatrix z(d, 2 * g, 2 * g);
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = 0; j < 2 * g; ++j) {
      std::int64_t v = x.body().at(i, j) - (i == j ? 1 : 0);
      z.set(i, j, (v / d) % d);
    }
  return SpLieElement(g, z.block(0, 0, g, g), z.block(0, g, g, g), z.block(g, 0, g, g));
}

/// alpha_{3|2}: the same digit map one level up, Sp(Z/p^3, p) -> sp(Z/p).
inline SpLieElement alpha32(const SympElement& x, std::int64_t p) {
  if (x.modulus() != p * p * p) throw std::invalid_argument("alpha32: modulus must be p^3");
  return alpha(x, p);
}

/// GL_g block embedding G |-> ( G 0 ; 0 tG^-1 ).
inline SympElement embed_gl(const ResidueMatrix& gm) {
  if (!gm.is_square()) throw std::invalid_argument("embed_gl: non-square input");
  const std::size_t g = gm.rows();
  ResidueMatrix x(gm.modulus(), 2 * g, 2 * g);
  x.paste(0, 0, gm);
  x.paste(g, g, exactalg::inverse_mod(gm.transposed()));
  return SympElement(g, x);
}

/// Conjugation action of GL_g on sp coordinates: gl by conjugation, the
/// a block by G b tG, the b block by tG^-1 c G^-1.
inline SpLieElement gl_act(const ResidueMatrix& gm, const SpLieElement& l) {
  ResidueMatrix ginv = exactalg::inverse_mod(gm);
  return SpLieElement(l.genus(), gm * l.gl_block() * ginv, gm * l.a_block() * gm.transposed(),
                      ginv.transposed() * l.b_block() * ginv);
}

inline SympElement stabilize(const SympElement& x, std::size_t k) {
  const std::size_t g = x.genus(), h = g + k;
  ResidueMatrix y = ResidueMatrix::identity(x.modulus(), 2 * h);
  auto remap = [&](std::size_t i) { return i < g ? i : h + (i - g); };
  for (std::size_t i = 0; i < 2 * g; ++i)
    for (std::size_t j = 0; j < 2 * g; ++j) y.set(remap(i), remap(j), x.body().at(i, j));
  return SympElement(h, y);
}

// --- exact builders for the level / handlebody parametrizations ------------

/// ( Id U ; 0 Id )( Id 0 ; L Id )( tD^-1 0 ; 0 D ) with U, L symmetric.
/// Bijective onto the level subgroup when U, L range over d*Sym and
/// D over Id + d*M; the factors are recovered by U = B D^-1, L = C tD.
inline SympElement make_level(std::size_t g, const ResidueMatrix& u, const ResidueMatrix& l,
                              const ResidueMatrix& d) {
  const std::int64_t m = u.modulus();
  ResidueMatrix upper = ResidueMatrix::identity(m, 2 * g);
  upper.paste(0, g, u);
  ResidueMatrix lower = ResidueMatrix::identity(m, 2 * g);
  lower.paste(g, 0, l);
  ResidueMatrix diag(m, 2 * g, 2 * g);
  diag.paste(0, 0, exactalg::inverse_mod(d.transposed()));
  diag.paste(g, g, d);
  return SympElement(g, upper * lower * diag);
}

/// ( G 0 ; M tG^-1 ) with M = tG^-1 * S, S symmetric (so tG M is symmetric).
inline SympElement make_spB(const ResidueMatrix& gm, const ResidueMatrix& s) {
  const std::size_t g = gm.rows();
  ResidueMatrix tginv = exactalg::inverse_mod(gm.transposed());
  ResidueMatrix x(gm.modulus(), 2 * g, 2 * g);
  x.paste(0, 0, gm);
  x.paste(g, 0, tginv * s);
  x.paste(g, g, tginv);
  return SympElement(g, x);
}

/// ( G N ; 0 tG^-1 ) with N = G * S, S symmetric (so G^-1 N is symmetric).
inline SympElement make_spA(const ResidueMatrix& gm, const ResidueMatrix& s) {
  const std::size_t g = gm.rows();
  ResidueMatrix x(gm.modulus(), 2 * g, 2 * g);
  x.paste(0, 0, gm);
  x.paste(0, g, gm * s);
  x.paste(g, g, exactalg::inverse_mod(gm.transposed()));
  return SympElement(g, x);
}

namespace detail {

inline ResidueMatrix random_symmetric(std::size_t g, std::int64_t m, std::int64_t scale,
                                      std::int64_t entry_bound, Rng& rng) {
  ResidueMatrix s(m, g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i; j < g; ++j) {
      std::int64_t v = scale * static_cast<std::int64_t>(rng.below(entry_bound));
      s.set(i, j, v);
      s.set(j, i, v);
    }
  return s;
}

inline ResidueMatrix random_matrix(std::size_t g, std::int64_t m, std::int64_t entry_bound,
                                   Rng& rng) {
  ResidueMatrix s(m, g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j)
      s.set(i, j, static_cast<std::int64_t>(rng.below(entry_bound)));
  return s;
}

inline void require_sampler_prime(std::int64_t p) {
  if (p < 5) throw std::invalid_argument("sampler: p must be a prime >= 5");
  for (std::int64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) throw std::invalid_argument("sampler: p must be a prime >= 5");
}

/// det(G) corrected to 1 mod m by rescaling the first column; requires
/// det(G) to be a unit, which holds for G = Id mod p here.
inline ResidueMatrix normalize_det(const ResidueMatrix& gm) {
  using exactalg::Int;
  Int dz = exactalg::det(gm.lift()) % gm.modulus();
  if (dz < 0) dz += gm.modulus();
  std::int64_t dinv = exactalg::inverse_unit(static_cast<std::int64_t>(dz), gm.modulus());
  ResidueMatrix g = gm;
  for (std::size_t i = 0; i < g.rows(); ++i) g.set(i, 0, g.at(i, 0) * dinv);
  return g;
}

}  // namespace detail

/// Uniform sample of the level-p subgroup of Sp_2g(Z/p^3); exact
/// parametrization, not a Markov chain.
inline SympElement sample_level(std::size_t g, std::int64_t p, Rng& rng) {
  detail::require_sampler_prime(p);
  const std::int64_t m = p * p * p;
  ResidueMatrix u = detail::random_symmetric(g, m, p, p * p, rng);
  ResidueMatrix l = detail::random_symmetric(g, m, p, p * p, rng);
  ResidueMatrix d = ResidueMatrix::identity(m, g) + detail::random_matrix(g, m, p * p, rng).scaled(p);
  return make_level(g, u, l, d);
}

/// Same parametrization one level down: level-d subgroup of Sp_2g(Z/d^2),
/// valid for any d >= 2 (used by the alpha property suites).
inline SympElement sample_level_sq(std::size_t g, std::int64_t d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("sample_level_sq: d must be >= 2");
  const std::int64_t m = d * d;
  ResidueMatrix u = detail::random_symmetric(g, m, d, d, rng);
  ResidueMatrix l = detail::random_symmetric(g, m, d, d, rng);
  ResidueMatrix dm = ResidueMatrix::identity(m, g) + detail::random_matrix(g, m, d, rng).scaled(d);
  return make_level(g, u, l, dm);
}

/// Random G = Id + pN with det corrected to exactly 1 mod p^3; this is the
/// mod-p^3 image of SL_g(Z, p).
inline ResidueMatrix sample_sl_level(std::size_t g, std::int64_t p, Rng& rng) {
  detail::require_sampler_prime(p);
  const std::int64_t m = p * p * p;
  ResidueMatrix gm =
      ResidueMatrix::identity(m, g) + detail::random_matrix(g, m, p * p, rng).scaled(p);
  return detail::normalize_det(gm);
}

inline SympElement sample_spB_level(std::size_t g, std::int64_t p, Rng& rng) {
  ResidueMatrix gm = sample_sl_level(g, p, rng);
  ResidueMatrix s = detail::random_symmetric(g, p * p * p, p, p * p, rng);
  return make_spB(gm, s);
}

inline SympElement sample_spA_level(std::size_t g, std::int64_t p, Rng& rng) {
  ResidueMatrix gm = sample_sl_level(g, p, rng);
  ResidueMatrix s = detail::random_symmetric(g, p * p * p, p, p * p, rng);
  return make_spA(gm, s);
}

/// Random product of the GL_g(Z) generator set {Id + e_ij (i != j), D_g}
/// reduced mod m; det is exactly +-1.
inline ResidueMatrix sample_gl_pm(std::size_t g, std::int64_t m, Rng& rng, std::size_t length = 12) {
  ResidueMatrix acc = ResidueMatrix::identity(m, g);
  for (std::size_t step = 0; step < length; ++step) {
    ResidueMatrix f = ResidueMatrix::identity(m, g);
    std::uint64_t kind = g >= 2 ? rng.below(3) : 2;
    if (kind < 2) {
      std::size_t i = rng.below(g), j = rng.below(g);
      if (i == j) j = (j + 1) % g;
      f.set(i, j, kind == 0 ? 1 : -1);
    } else {
      f.set(0, 0, -1);
    }
    acc = acc * f;
  }
  return acc;
}

/// Sp^AB sampler: embed_gl of a det-(+-1) block, the mod-p^3 shadow of the
/// mapping classes extending to the sphere.
inline SympElement sample_spAB(std::size_t g, std::int64_t p, Rng& rng) {
  detail::require_sampler_prime(p);
  return embed_gl(sample_gl_pm(g, p * p * p, rng));
}

}  // namespace torelli::symplectic
