#pragma once

#include "torelli/exact_int.hpp"
#include "torelli/rng.hpp"
#include "torelli/symplectic.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace torelli::homology3 {

using exactalg::Int;
using exactalg::IntMatrix;
using exactalg::ResidueMatrix;
using symplectic::SympElement;

struct InadmissibleError : std::domain_error {
  using std::domain_error::domain_error;
};

inline bool is_integral_symplectic(const IntMatrix& x, std::size_t g) {
  if (x.rows() != 2 * g || x.cols() != 2 * g) return false;
  IntMatrix w(2 * g, 2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    w.at(i, g + i) = -1;
    w.at(g + i, i) = 1;
  }
  return x.transposed() * w * x == w;
}

/// Genus-g Heegaard gluing, carried by its integral symplectic homology
/// action in the a/b block basis.
struct HeegaardGluing {
  std::size_t genus;
  IntMatrix gluing;

  HeegaardGluing(std::size_t g, IntMatrix x) : genus(g), gluing(std::move(x)) {
    if (!is_integral_symplectic(gluing, genus))
      throw std::invalid_argument("HeegaardGluing: matrix is not integral symplectic");
  }

  IntMatrix block_E() const { return gluing.block(0, 0, genus, genus); }
  IntMatrix block_F() const { return gluing.block(0, genus, genus, genus); }
  IntMatrix block_G() const { return gluing.block(genus, 0, genus, genus); }
  IntMatrix block_H() const { return gluing.block(genus, genus, genus, genus); }
};

/// First homology of the glued manifold: coker of the H block.
struct HomologyReport {
  std::vector<Int> torsion_coefficients;  // the invariant factors > 1
  std::size_t free_rank = 0;
  std::optional<Int> order;  // empty means infinite
};

inline HomologyReport h1_of_splitting(const HeegaardGluing& hg) {
  auto snf = exactalg::smith_normal_form(hg.block_H());
  HomologyReport r;
  for (const auto& f : snf.invariant_factors)
    if (f > 1) r.torsion_coefficients.push_back(f);
  r.free_rank = hg.genus - snf.invariant_factors.size();
  if (r.free_rank == 0) {
    Int n = 1;
    for (const auto& f : snf.invariant_factors) n *= f;
    r.order = n;
  }
  return r;
}

inline Int order_h1(const HomologyReport& r) {
  if (!r.order)
    throw InadmissibleError("order_h1: infinite first homology (not a rational homology sphere)");
  return *r.order;
}

/// All levels d in [2, bound] with d | n-1 or d | n+1 (every d divides 0).
inline std::vector<std::int64_t> admissible_levels(const Int& n, std::int64_t bound) {
  if (n < 1 || bound < 2) throw std::invalid_argument("admissible_levels: need n >= 1, bound >= 2");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d <= bound; ++d)
    if ((n - 1) % d == 0 || (n + 1) % d == 0) out.push_back(d);
  return out;
}

inline std::int64_t euler_totient(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      while (n % q == 0) n /= q;
      result -= result / q;
    }
  if (n > 1) result -= result / n;
  return result;
}

/// Whether "mod-d sphere" and "level-d-buildable" coincide: |(Z/d)^x| <= 2.
inline bool sets_coincide(std::int64_t d) {
  if (d < 2) throw std::invalid_argument("sets_coincide: d >= 2 required");
  return euler_totient(d) <= 2;
}

/// Double-coset trivialization mod d: returns (Xa, Yb), upper- and
/// lower-triangular shape, with Xa * X * Yb = Id. Signals InadmissibleError
/// when det(H-block) is not +-1 mod d.
inline std::pair<SympElement, SympElement> trivialize_mod_d(const SympElement& x) {
  const std::size_t g = x.genus();
  const std::int64_t d = x.modulus();
  ResidueMatrix hb = x.block_H();
  Int dh = exactalg::det(hb.lift()) % d;
  if (dh < 0) dh += d;
  if (dh != 1 && dh != d - 1)
    throw InadmissibleError("trivialize_mod_d: det(H) is not +-1 mod d (level not admissible)");

  ResidueMatrix a = (ResidueMatrix(d, g, g) - x.block_F()) * exactalg::inverse_mod(hb);
  ResidueMatrix xa = ResidueMatrix::identity(d, 2 * g);
  xa.paste(0, g, a);

  ResidueMatrix lower(d, 2 * g, 2 * g);
  lower.paste(0, 0, x.block_E() + a * x.block_G());
  lower.paste(g, 0, x.block_G());
  lower.paste(g, g, hb);

  return {SympElement(g, xa), SympElement(g, exactalg::inverse_mod(lower))};
}

/// Genus-1 level-d gluing for the Lens space L(1+dk, dl), i.e. an SL_2(Z)
/// matrix congruent to Id mod d with F entry dl and H entry 1+dk.
struct LensGluing {
  std::int64_t d, k, l;
  IntMatrix matrix;
};

inline LensGluing lens_level_gluing(std::int64_t d, std::int64_t k, std::int64_t l) {
  if (d < 2) throw std::invalid_argument("lens_level_gluing: d >= 2 required");
  std::int64_t p = 1 + d * k, q = d * l;
  std::int64_t xx, yy;
  if (exactalg::egcd64(p, q, xx, yy) != 1)
    throw std::invalid_argument("lens_level_gluing: gcd(1+dk, dl) must be 1");
  // a*(1+dk) - b*dl = 1, then the column correction puts the matrix in the
  // level subgroup without touching the F and H entries.
  std::int64_t a = xx, b = -yy;
  IntMatrix mtx(2, 2);
  mtx.at(0, 0) = Int(a) - Int(b) * q;
  mtx.at(0, 1) = q;
  mtx.at(1, 0) = -Int(b) * d * k;
  mtx.at(1, 1) = p;

  LensGluing out{d, k, l, mtx};
  if (exactalg::det(mtx) != 1) throw std::logic_error("lens_level_gluing: determinant corrupted");
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      if ((mtx.at(i, j) - (i == j ? 1 : 0)) % d != 0)
        throw std::logic_error("lens_level_gluing: not level-d");
  return out;
}

/// Random product of exact integral symplectic generators: block shears
/// ( Id S ; 0 Id ), ( Id 0 ; S Id ) and GL embeddings of Id + e_ij, D_g.
inline IntMatrix random_integral_symplectic(std::size_t g, Rng& rng, std::size_t length = 6) {
  IntMatrix acc = IntMatrix::identity(2 * g);
  for (std::size_t step = 0; step < length; ++step) {
    IntMatrix f = IntMatrix::identity(2 * g);
    switch (rng.below(4)) {
      case 0:
      case 1: {
        bool upper = rng.below(2) == 0;
        for (std::size_t i = 0; i < g; ++i)
          for (std::size_t j = i; j < g; ++j) {
            std::int64_t v = static_cast<std::int64_t>(rng.below(5)) - 2;
            if (upper) {
              f.at(i, g + j) = v;
              f.at(j, g + i) = v;
            } else {
              f.at(g + i, j) = v;
              f.at(g + j, i) = v;
            }
          }
        break;
      }
      case 2: {
        if (g >= 2) {
          std::size_t i = rng.below(g), j = rng.below(g);
          if (i == j) j = (j + 1) % g;
          std::int64_t v = rng.below(2) == 0 ? 1 : -1;
          f.at(i, j) = v;       // E = Id + v e_ij
          f.at(g + j, g + i) = -v;  // tE^{-1} = Id - v e_ji
        }
        break;
      }
      default: {
        f.at(0, 0) = -1;  // embed_gl(D_g)
        f.at(g, g) = -1;
        break;
      }
    }
    acc = acc * f;
  }
  return acc;
}

}  // namespace torelli::homology3
