#pragma once

#include "torelli/coinv.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

namespace torelli::coinv {

using multilinear::Ext3Vector;
using symplectic::SpLieElement;

struct SpaceOptions {
  GroupVariant variant = GroupVariant::GL;
  Conventions conventions{};
  bool with_ihx = true;  // mutation hook for the tree space
  std::size_t feasibility_ceiling = 5000;
};

namespace build {

/// GL_g(Z) generator list as g x g residue matrices mod p.
inline std::vector<ResidueMatrix> base_generators(std::size_t g, std::int64_t p,
                                                  GroupVariant variant) {
  std::vector<ResidueMatrix> gens;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      if (i == j) continue;
      ResidueMatrix e = ResidueMatrix::identity(p, g);
      e.set(i, j, 1);
      gens.push_back(std::move(e));
    }
  if (variant == GroupVariant::GL) {
    ResidueMatrix dg = ResidueMatrix::identity(p, g);
    dg.set(0, 0, -1);
    gens.push_back(std::move(dg));
  }
  return gens;
}

// --- coordinate charts -------------------------------------------------------

struct SymChart {
  std::size_t g;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i <= j)
  explicit SymChart(std::size_t g_) : g(g_) {
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = i; j < g; ++j) pairs.emplace_back(i, j);
  }
  std::size_t dim() const { return pairs.size(); }
  ResidueMatrix unpack(const VecI& v, std::int64_t p) const {
    ResidueMatrix s(p, g, g);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      s.set(pairs[k].first, pairs[k].second, v[k]);
      s.set(pairs[k].second, pairs[k].first, v[k]);
    }
    return s;
  }
  VecI pack(const ResidueMatrix& s) const {
    VecI v(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) v[k] = s.at(pairs[k].first, pairs[k].second);
    return v;
  }
};

/// sp coordinates: gl block (g^2 entries) then the two symmetric blocks.
struct SpChart {
  std::size_t g;
  SymChart sym;
  explicit SpChart(std::size_t g_) : g(g_), sym(g_) {}
  std::size_t dim() const { return g * g + 2 * sym.dim(); }
  SpLieElement unpack(const VecI& v, std::int64_t p) const {
    ResidueMatrix gl(p, g, g);
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) gl.set(i, j, v[i * g + j]);
    VecI va(v.begin() + g * g, v.begin() + g * g + sym.dim());
    VecI vb(v.begin() + g * g + sym.dim(), v.end());
    return SpLieElement(g, gl, sym.unpack(va, p), sym.unpack(vb, p));
  }
  VecI pack(const SpLieElement& l) const {
    VecI v;
    v.reserve(dim());
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t j = 0; j < g; ++j) v.push_back(l.gl_block().at(i, j));
    for (auto x : sym.pack(l.a_block())) v.push_back(x);
    for (auto x : sym.pack(l.b_block())) v.push_back(x);
    return v;
  }
};

inline std::vector<VecI> matrix_action(std::size_t dim, std::int64_t p,
                                       const std::function<VecI(const VecI&)>& act) {
  std::vector<VecI> m(dim, VecI(dim, 0));
  VecI e(dim, 0);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(e.begin(), e.end(), 0);
    e[c] = 1;
    VecI img = act(e);
    for (std::size_t r = 0; r < dim; ++r) m[r][c] = ResidueMatrix::canonical(img[r], p);
  }
  return m;
}

}  // namespace build

inline void attach_ext3_square_data(ActionSpec& spec, const Ext3Context& ctx, bool wedge);
inline void attach_sp_square_data(ActionSpec& spec, const build::SpChart& chart, bool wedge);
inline void attach_tree_data(ActionSpec& spec, const trees::TreeContext& ctx);

/// Build the ActionSpec for one of the named coinvariant problems. Space ids:
///   sym, gl, sl, sp, ext3, ext3-tensor, ext3-wedge, sp-tensor, sp-wedge,
///   a2tree.
inline ActionSpec build_space(const std::string& space, std::size_t g, std::int64_t p,
                              const SpaceOptions& opt = {}) {
  if (p != 5 && p != 7) throw std::invalid_argument("coinvariants: p must be 5 or 7");
  if (g < 2) throw std::invalid_argument("coinvariants: g >= 2 required");

  ActionSpec spec;
  spec.space = space;
  spec.p = p;
  const auto gens = build::base_generators(g, p, opt.variant);

  auto reject_if_infeasible = [&](std::size_t dim) {
    if (dim > opt.feasibility_ceiling) {
      std::ostringstream os;
      os << "coinvariants: ambient dimension " << dim << " for space '" << space
         << "' exceeds the ceiling " << opt.feasibility_ceiling;
      throw std::invalid_argument(os.str());
    }
  };

  auto add_matrix_gens = [&](std::size_t dim, auto&& act_of) {
    for (const auto& gm : gens)
      spec.generators.push_back(std::make_shared<MatrixOp>(
          build::matrix_action(dim, p, [&](const VecI& v) { return act_of(gm, v); }), p));
  };

  if (space == "sym") {
    build::SymChart chart(g);
    spec.dim = chart.dim();
    reject_if_infeasible(spec.dim);
    add_matrix_gens(spec.dim, [&](const ResidueMatrix& gm, const VecI& v) {
      return chart.pack(gm * chart.unpack(v, p) * gm.transposed());
    });
  } else if (space == "gl" || space == "sl") {
    const bool sl = space == "sl";
    // sl coordinates: off-diagonals e_ij, then d_i = e_ii - e_gg (i < g)
    std::size_t dim = sl ? g * g - 1 : g * g;
    spec.dim = dim;
    reject_if_infeasible(dim);
    auto unpack = [&](const VecI& v) {
      ResidueMatrix m(p, g, g);
      if (!sl) {
        for (std::size_t i = 0; i < g; ++i)
          for (std::size_t j = 0; j < g; ++j) m.set(i, j, v[i * g + j]);
        return m;
      }
      std::size_t k = 0;
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
          if (i != j) m.set(i, j, v[k++]);
      std::int64_t last = 0;
      for (std::size_t i = 0; i + 1 < g; ++i) {
        m.set(i, i, v[k + i]);
        last -= v[k + i];
      }
      m.set(g - 1, g - 1, last);
      return m;
    };
    auto pack = [&](const ResidueMatrix& m) {
      VecI v(dim);
      if (!sl) {
        for (std::size_t i = 0; i < g; ++i)
          for (std::size_t j = 0; j < g; ++j) v[i * g + j] = m.at(i, j);
        return v;
      }
      std::size_t k = 0;
      for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
          if (i != j) v[k++] = m.at(i, j);
      for (std::size_t i = 0; i + 1 < g; ++i) v[k + i] = m.at(i, i);
      return v;
    };
    add_matrix_gens(dim, [&](const ResidueMatrix& gm, const VecI& v) {
      return pack(gm * unpack(v) * exactalg::inverse_mod(gm));
    });
    if (!sl) {
      VecI trace(dim, 0), e11(dim, 0);
      for (std::size_t i = 0; i < g; ++i) trace[i * g + i] = 1;
      e11[0] = 1;
      spec.dual_functionals.push_back({"trace", trace});
      spec.candidates.push_back({"e11", e11});
    }
  } else if (space == "sp") {
    build::SpChart chart(g);
    spec.dim = chart.dim();
    reject_if_infeasible(spec.dim);
    add_matrix_gens(spec.dim, [&](const ResidueMatrix& gm, const VecI& v) {
      return chart.pack(symplectic::gl_act(gm, chart.unpack(v, p)));
    });
    VecI trace(spec.dim, 0);
    for (std::size_t i = 0; i < g; ++i) trace[i * g + i] = 1;
    spec.dual_functionals.push_back({"trace-of-gl-block", trace});
    VecI n11(spec.dim, 0);
    n11[0] = 1;
    spec.candidates.push_back({"n11", n11});
  } else if (space == "ext3" || space == "ext3-tensor" || space == "ext3-wedge") {
    Ext3Context ctx(g, p, opt.conventions);
    const std::size_t m = ctx.dim();
    std::vector<std::vector<VecI>> base;
    base.reserve(gens.size());
    for (const auto& gm : gens)
      base.push_back(multilinear::ext3_matrix(ctx, multilinear::h_action(ctx, gm)));

    if (space == "ext3") {
      spec.dim = m;
      reject_if_infeasible(m);
      for (auto& b : base) spec.generators.push_back(std::make_shared<MatrixOp>(b, p));
    } else {
      const bool wedge = space == "ext3-wedge";
      spec.dim = wedge ? m * (m - 1) / 2 : m * m;
      reject_if_infeasible(spec.dim);
      for (auto& b : base) spec.generators.push_back(std::make_shared<TensorSquareOp>(b, p, wedge));
      attach_ext3_square_data(spec, ctx, wedge);
    }
  } else if (space == "sp-tensor" || space == "sp-wedge") {
    build::SpChart chart(g);
    const std::size_t m = chart.dim();
    const bool wedge = space == "sp-wedge";
    spec.dim = wedge ? m * (m - 1) / 2 : m * m;
    reject_if_infeasible(spec.dim);
    for (const auto& gm : gens) {
      auto b = build::matrix_action(m, p, [&](const VecI& v) {
        return chart.pack(symplectic::gl_act(gm, chart.unpack(v, p)));
      });
      spec.generators.push_back(std::make_shared<TensorSquareOp>(b, p, wedge));
    }
    attach_sp_square_data(spec, chart, wedge);
  } else if (space == "a2tree") {
    trees::TreeContext ctx(g, p, opt.conventions, opt.with_ihx);
    Ext3Context ext(g, p, opt.conventions);
    spec.dim = ctx.algebra_dim();
    reject_if_infeasible(spec.dim);
    for (const auto& gm : gens)
      spec.generators.push_back(std::make_shared<MatrixOp>(
          trees::a2_quotient_action(ctx, multilinear::h_action(ext, gm)), p));
    attach_tree_data(spec, ctx);
  } else {
    throw std::invalid_argument("coinvariants: unknown space '" + space + "'");
  }
  return spec;
}

// --- candidate generators and dual functionals for the square spaces --------

inline void attach_ext3_square_data(ActionSpec& spec, const Ext3Context& ctx, bool wedge) {
  const std::size_t m = ctx.dim();
  const std::int64_t p = ctx.p();
  using multilinear::label_a;
  using multilinear::label_b;

  auto rk = [&](std::size_t x, std::size_t y, std::size_t z) { return ctx.rank(x, y, z); };
  const std::size_t a123 = rk(label_a(0), label_a(1), label_a(2));
  const std::size_t b123 = rk(label_b(0), label_b(1), label_b(2));
  const std::size_t aab = rk(label_a(0), label_a(1), label_b(1));
  const std::size_t bab = rk(label_b(0), label_a(1), label_b(1));
  const std::size_t bab3 = rk(label_b(0), label_a(2), label_b(2));
  const std::size_t aab3 = rk(label_a(0), label_a(2), label_b(2));

  auto tensor_unit = [&](std::size_t i, std::size_t j, const std::string& name) {
    VecI v(spec.dim, 0);
    if (!wedge) {
      v[i * m + j] = 1;
    } else {
      // wedge coordinate of e_i ^ e_j at the ordered pair
      if (i < j)
        v[i * m - i * (i + 1) / 2 + (j - i - 1)] = 1;
      else
        v[j * m - j * (j + 1) / 2 + (i - j - 1)] = p - 1;
    }
    spec.candidates.push_back({name, std::move(v)});
  };
  // wedge pair ranking helper must match TensorSquareOp's (i<j) lex order
  // which enumerates pairs row by row: index(i,j) = i*m - i(i+1)/2 + (j-i-1).

  if (!wedge) {
    tensor_unit(a123, b123, "a123 (x) b123");
    tensor_unit(b123, a123, "b123 (x) a123");
    tensor_unit(aab, bab, "a1a2b2 (x) b1a2b2");
    tensor_unit(bab, aab, "b1a2b2 (x) a1a2b2");
    tensor_unit(aab, bab3, "a1a2b2 (x) b1a3b3");
    tensor_unit(bab, aab3, "b1a2b2 (x) a1a3b3");
  } else {
    tensor_unit(a123, b123, "a123 ^ b123");
    tensor_unit(aab, bab, "a1a2b2 ^ b1a2b2");
    tensor_unit(aab, bab3, "a1a2b2 ^ b1a3b3");
  }

  // invariant functionals: the projected forms
  auto part = [&](std::size_t r) { return ctx.a_count(r); };  // 3 A, 0 B, 2 A2B, 1 B2A
  auto basis_form = [&](int px, int py, bool use_q) {
    VecI f(spec.dim, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (part(i) != px) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (part(j) != py) continue;
        std::int64_t val;
        if (!use_q) {
          val = multilinear::theta_basis(ctx, i, j);
        } else {
          Ext3Vector ei = Ext3Vector::zero(ctx), ej = Ext3Vector::zero(ctx);
          ei.coords[i] = 1;
          ej.coords[j] = 1;
          val = multilinear::q_form(ctx, ei, ej);
        }
        if (val == 0) continue;
        if (!wedge) {
          f[i * m + j] = val;
        } else if (i < j) {
          std::size_t k = i * m - i * (i + 1) / 2 + (j - i - 1);
          f[k] = ResidueMatrix::canonical(f[k] + val, p);
        } else if (j < i) {
          std::size_t k = j * m - j * (j + 1) / 2 + (i - j - 1);
          f[k] = ResidueMatrix::canonical(f[k] - val, p);
        }
      }
    }
    return f;
  };
  if (!wedge) {
    spec.dual_functionals.push_back({"theta(piA,piB)", basis_form(3, 0, false)});
    spec.dual_functionals.push_back({"theta(piA2B,piB2A)", basis_form(2, 1, false)});
    spec.dual_functionals.push_back({"q(piA2B,piB2A)", basis_form(2, 1, true)});
    spec.dual_functionals.push_back({"theta(piB,piA)", basis_form(0, 3, false)});
    spec.dual_functionals.push_back({"theta(piB2A,piA2B)", basis_form(1, 2, false)});
    spec.dual_functionals.push_back({"q(piB2A,piA2B)", basis_form(1, 2, true)});
  } else {
    // full Theta, Q and tJ - J as functionals on the wedge coordinates
    VecI th(spec.dim, 0), q(spec.dim, 0), tjj(spec.dim, 0);
    for (std::size_t i = 0, k = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j, ++k) {
        Ext3Vector ei = Ext3Vector::zero(ctx), ej = Ext3Vector::zero(ctx);
        ei.coords[i] = 1;
        ej.coords[j] = 1;
        th[k] = multilinear::theta_basis(ctx, i, j);
        q[k] = multilinear::q_form(ctx, ei, ej);
        tjj[k] = ResidueMatrix::canonical(
            multilinear::tJ_form(ctx, ei, ej) - multilinear::J_form(ctx, ei, ej), p);
      }
    spec.dual_functionals.push_back({"theta", th});
    spec.dual_functionals.push_back({"q", q});
    spec.dual_functionals.push_back({"tJ-J", tjj});
  }
}

inline void attach_sp_square_data(ActionSpec& spec, const build::SpChart& chart, bool wedge) {
  const std::size_t g = chart.g, m = chart.dim();
  const std::int64_t p = spec.p;

  auto unit_sp = [&](const std::string& block, std::size_t i, std::size_t j) {
    // index of e_ij within the chart; block in {gl, a, b}, i <= j for a/b
    if (block == "gl") return i * g + j;
    std::size_t off = g * g + (block == "b" ? chart.sym.dim() : 0);
    for (std::size_t k = 0; k < chart.sym.pairs.size(); ++k)
      if (chart.sym.pairs[k] == std::make_pair(i, j)) return off + k;
    throw std::logic_error("unit_sp: bad symmetric index");
  };
  const std::size_t n11 = unit_sp("gl", 0, 0);
  const std::size_t n22 = unit_sp("gl", 1, 1);
  const std::size_t u11 = unit_sp("a", 0, 0);
  const std::size_t l11 = unit_sp("b", 0, 0);

  auto pair_rank = [&](std::size_t i, std::size_t j) {
    return i * m - i * (i + 1) / 2 + (j - i - 1);
  };
  auto tensor_unit = [&](std::size_t i, std::size_t j, const std::string& name) {
    VecI v(spec.dim, 0);
    if (!wedge)
      v[i * m + j] = 1;
    else if (i < j)
      v[pair_rank(i, j)] = 1;
    else
      v[pair_rank(j, i)] = p - 1;
    spec.candidates.push_back({name, std::move(v)});
  };
  if (!wedge) {
    tensor_unit(n11, n11, "n11 (x) n11");
    tensor_unit(n11, n22, "n11 (x) n22");
    tensor_unit(u11, l11, "u11 (x) l11");
    tensor_unit(l11, u11, "l11 (x) u11");
  } else {
    tensor_unit(u11, l11, "u11 ^ l11");
  }

  // functionals T1, T2, K, tK on basis pairs (tK - K on the wedge)
  auto unpack_unit = [&](std::size_t i) {
    VecI v(m, 0);
    v[i] = 1;
    return chart.unpack(v, p);
  };
  std::vector<SpLieElement> basis;
  basis.reserve(m);
  for (std::size_t i = 0; i < m; ++i) basis.push_back(unpack_unit(i));

  auto form_vec = [&](auto&& f) {
    VecI v(spec.dim, 0);
    if (!wedge) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) v[i * m + j] = f(basis[i], basis[j]);
    } else {
      for (std::size_t i = 0, k = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j, ++k) v[k] = f(basis[i], basis[j]);
    }
    return v;
  };
  if (!wedge) {
    spec.dual_functionals.push_back({"T1", form_vec(multilinear::T1_form)});
    spec.dual_functionals.push_back({"T2", form_vec(multilinear::T2_form)});
    spec.dual_functionals.push_back({"K", form_vec(multilinear::K_form)});
    spec.dual_functionals.push_back({"tK", form_vec(multilinear::tK_form)});
  } else {
    spec.dual_functionals.push_back(
        {"tK-K", form_vec([&](const SpLieElement& x, const SpLieElement& y) {
           return ResidueMatrix::canonical(multilinear::tK_form(x, y) - multilinear::K_form(x, y),
                                           p);
         })});
  }
}

inline void attach_tree_data(ActionSpec& spec, const trees::TreeContext& ctx) {
  const auto& cols = ctx.quotient_cols();
  auto quotient_of = [&](std::array<std::size_t, 4> t) {
    std::vector<std::int64_t> raw(ctx.orbit_dim(), 0);
    ctx.accumulate(raw, t, 1);
    auto red = ctx.reduce(std::move(raw));
    VecI v(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) v[i] = red[cols[i]];
    return v;
  };
  using multilinear::label_a;
  using multilinear::label_b;
  spec.candidates.push_back(
      {"T(b1,b2|a1,a2)", quotient_of({label_b(0), label_b(1), label_a(0), label_a(1)})});
  spec.candidates.push_back(
      {"T(a1,b1|a2,b2)", quotient_of({label_a(0), label_b(0), label_a(1), label_b(1)})});

  VecI d1(cols.size()), d2(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    d1[i] = ctx.d1_vector()[cols[i]];
    d2[i] = ctx.d2_vector()[cols[i]];
  }
  spec.dual_functionals.push_back({"d1", d1});
  spec.dual_functionals.push_back({"d2", d2});
}

/// The spec-facing entry point.
inline CoinvariantReport coinvariants(const std::string& space, std::size_t g, std::int64_t p,
                                      const SpaceOptions& opt = {}) {
  return run_coinvariants(build_space(space, g, p, opt));
}

/// Evaluate candidate bilinear forms (as dual functionals of the square
/// spaces) on the computed coinvariant generators; the verdict is the
/// invertibility of the evaluation matrix.
struct FormBasisVerdict {
  std::vector<std::string> form_names;
  std::vector<std::string> generator_names;
  std::vector<VecI> evaluation;  // [form][generator]
  bool all_invariant = false;
  bool invertible = false;
};

inline FormBasisVerdict invariant_forms(const std::string& space, std::size_t g, std::int64_t p,
                                        const SpaceOptions& opt = {},
                                        std::optional<std::vector<std::string>> subset = {}) {
  ActionSpec spec = build_space(space, g, p, opt);
  std::vector<Named> forms;
  for (const auto& f : spec.dual_functionals)
    if (!subset || std::find(subset->begin(), subset->end(), f.name) != subset->end())
      forms.push_back(f);

  CoinvariantReport rep = run_coinvariants(spec);

  FormBasisVerdict v;
  v.all_invariant = true;
  Vec16 img;
  for (const auto& f : forms) {
    Vec16 fv = to_vec16(f.vector, p);
    for (const auto& gen : spec.generators) {
      gen->apply_transposed(fv, img);
      if (img != fv) v.all_invariant = false;
    }
  }
  for (const auto& f : forms) v.form_names.push_back(f.name);
  v.generator_names = rep.candidate_names;
  std::vector<VecI> m;
  for (const auto& f : forms) {
    VecI row;
    for (const auto& c : spec.candidates) {
      std::int64_t acc = 0;
      for (std::size_t i = 0; i < c.vector.size(); ++i)
        acc = (acc + f.vector[i] * c.vector[i]) % p;
      row.push_back(ResidueMatrix::canonical(acc, p));
    }
    m.push_back(row);
  }
  v.evaluation = m;
  v.invertible = !m.empty() && m.size() == m.front().size() && exactalg::fp_det(m, p) != 0;
  return v;
}

}  // namespace torelli::coinv
