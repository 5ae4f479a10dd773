#include <catch2/catch_amalgamated.hpp>

#include "torelli/trees.hpp"

using namespace torelli;
using namespace torelli::exactalg;
using namespace torelli::multilinear;
using namespace torelli::trees;

namespace {

constexpr std::size_t A1 = 0, B1 = 1, A2 = 2, B2 = 3, A3 = 4, B3 = 5;

TreeH2 one_tree(const TreeContext& ctx, std::array<std::size_t, 4> t) {
  return canonicalize(ctx, {{t, 1}});
}

struct TableRow {
  std::array<std::size_t, 3> x, y;
  std::int64_t d1v, d2v, theta, q, tj_minus_j;
};

// the three generator pairs with their five expected columns
const TableRow kTable[3] = {
    {{A1, A2, A3}, {B1, B2, B3}, 3, 3, -1, 0, -1},
    {{A1, A2, B2}, {B1, A2, B2}, 5, -1, -1, -4, 0},
    {{A1, A2, B2}, {B1, A3, B3}, 2, 0, 0, -4, 0},
};

bool table_matches(const Conventions& conv, std::int64_t p) {
  Ext3Context ext(3, p, conv);
  TreeContext ctx(3, p, conv);
  for (const auto& row : kTable) {
    auto x = Ext3Vector::wedge(ext, row.x[0], row.x[1], row.x[2]);
    auto y = Ext3Vector::wedge(ext, row.y[0], row.y[1], row.y[2]);
    auto br = bracket(ctx, ext, x, y);
    auto want = [&](std::int64_t v) { return ResidueMatrix::canonical(v, p); };
    if (d1(ctx, br) != want(row.d1v)) return false;
    if (d2(ctx, br) != want(row.d2v)) return false;
    if (theta_form(ext, x, y) != want(row.theta)) return false;
    if (q_form(ext, x, y) != want(row.q)) return false;
    std::int64_t tjj = tJ_form(ext, x, y) - J_form(ext, x, y);
    if (ResidueMatrix::canonical(tjj, p) != want(row.tj_minus_j)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonicalization kills the AS and swap relations") {
  TreeContext ctx(2, 5);
  REQUIRE(canonicalize(ctx, {{{A1, B1, A2, B2}, 1}, {{B1, A1, A2, B2}, 1}}).is_zero());
  REQUIRE(canonicalize(ctx, {{{A1, B1, A2, B2}, 1}, {{A1, B1, B2, A2}, 1}}).is_zero());
  REQUIRE(canonicalize(ctx, {{{A1, B1, A2, B2}, 1}, {{A2, B2, A1, B1}, -1}}).is_zero());
  REQUIRE(canonicalize(ctx, {{{A1, A1, A2, B2}, 1}}).is_zero());
  // idempotence / linearity of the canonical form
  auto t = one_tree(ctx, {A1, B1, A2, B2});
  REQUIRE(ctx.reduce(t.coords) == t.coords);
}

TEST_CASE("the labeled IHX instance vanishes") {
  TreeContext ctx(2, 5);
  auto v = canonicalize(ctx, {{{B1, A2, A1, B2}, 1}, {{B1, B2, A1, A2}, -1}, {{A2, B2, B1, A1}, -1}});
  REQUIRE(v.is_zero());
}

TEST_CASE("d1 and d2 are well defined: they annihilate the relation subspace") {
  for (std::int64_t p : {5, 7}) {
    for (std::size_t g : {2u, 3u, 4u}) {
      TreeContext ctx(g, p);
      for (const auto& row : ctx.relation_subspace().basis()) {
        REQUIRE(ctx.eval_d1(row) == 0);
        REQUIRE(ctx.eval_d2(row) == 0);
      }
    }
  }
}

TEST_CASE("d1, d2: pinned single-tree values") {
  TreeContext ctx(2, 5);
  auto t = one_tree(ctx, {A2, B2, A2, B2});
  REQUIRE(d1(ctx, t) == 3);
  REQUIRE(d2(ctx, t) == ResidueMatrix::canonical(-1, 5));
  // d1 kills every AS combination trivially
  auto as = canonicalize(ctx, {{{A1, B1, A2, B2}, 1}, {{B1, A1, A2, B2}, 1}});
  REQUIRE(d1(ctx, as) == 0);
}

TEST_CASE("bracket: disjoint symplectic support gives zero") {
  Ext3Context ext(3, 5);
  TreeContext ctx(3, 5);
  auto x = Ext3Vector::wedge(ext, A1, A2, A3);
  auto y = Ext3Vector::wedge(ext, A1, A2, B3);  // only pairing a3/b3 is absent
  // supports pair only through omega; pick y with no b-partners of x
  auto z = Ext3Vector::wedge(ext, A1, A2, A3);
  REQUIRE(bracket(ctx, ext, x, z).is_zero());
}

TEST_CASE("bracket is antisymmetric after canonicalization") {
  Ext3Context ext(3, 5);
  TreeContext ctx(3, 5);
  Rng rng(4);
  for (int t = 0; t < 15; ++t) {
    Ext3Vector x = Ext3Vector::zero(ext), y = Ext3Vector::zero(ext);
    for (auto& c : x.coords) c = rng.below(5);
    for (auto& c : y.coords) c = rng.below(5);
    auto xy = bracket(ctx, ext, x, y);
    auto yx = bracket(ctx, ext, y, x);
    for (std::size_t i = 0; i < xy.coords.size(); ++i)
      REQUIRE((xy.coords[i] + yx.coords[i]) % 5 == 0);
  }
}

TEST_CASE("full table reproduction under the shipped calibration") {
  REQUIRE(table_matches(Conventions(-1, -1), 5));
  REQUIRE(table_matches(Conventions(-1, -1), 7));
}

TEST_CASE("calibration search: only (-1,-1) reproduces the table") {
  int hits = 0;
  Conventions winner;
  for (int so : {+1, -1})
    for (int sw : {+1, -1})
      if (table_matches(Conventions(so, sw), 5)) {
        ++hits;
        winner = Conventions(so, sw);
      }
  REQUIRE(hits == 1);
  REQUIRE(winner == Conventions(-1, -1));
}

TEST_CASE("linear identities of the bracket on all basis pairs (g = 4, p = 5)") {
  const std::int64_t p = 5;
  Ext3Context ext(4, p);
  TreeContext ctx(4, p);
  const std::int64_t half = (p + 1) / 2;
  for (std::size_t i = 0; i < ext.dim(); ++i) {
    Ext3Vector x = Ext3Vector::zero(ext);
    x.coords[i] = 1;
    for (std::size_t j = 0; j < ext.dim(); ++j) {
      Ext3Vector y = Ext3Vector::zero(ext);
      y.coords[j] = 1;
      auto br = bracket(ctx, ext, x, y);
      std::int64_t th = theta_basis(ext, i, j);
      std::int64_t qv = q_form(ext, x, y);
      std::int64_t tjj = ResidueMatrix::canonical(tJ_form(ext, x, y) - J_form(ext, x, y), p);
      REQUIRE(d1(ctx, br) == ResidueMatrix::canonical(-3 * th - half * qv, p));
      REQUIRE(d2(ctx, br) == ResidueMatrix::canonical(th - 4 * tjj, p));
    }
  }
}

TEST_CASE("d1, d2 evaluate invertibly on the two coinvariant generator trees") {
  for (std::int64_t p : {5, 7}) {
    TreeContext ctx(2, p);
    auto t1 = one_tree(ctx, {B1, B2, A1, A2});
    auto t2 = one_tree(ctx, {A1, B1, A2, B2});
    REQUIRE(d1(ctx, t1) == 1);
    REQUIRE(d2(ctx, t1) == 1);
    REQUIRE(d1(ctx, t2) == 2);
    REQUIRE(d2(ctx, t2) == 0);
    std::int64_t det = fp_det({{d1(ctx, t1), d2(ctx, t1)}, {d1(ctx, t2), d2(ctx, t2)}}, p);
    REQUIRE(det != 0);
  }
}

TEST_CASE("without IHX the relation subspace shrinks") {
  TreeContext with(3, 5, Conventions(), true);
  TreeContext without(3, 5, Conventions(), false);
  REQUIRE(without.relation_subspace().rank() == 0);
  REQUIRE(without.algebra_dim() > with.algebra_dim());
}
