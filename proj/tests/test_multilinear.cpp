#include <catch2/catch_amalgamated.hpp>

#include "torelli/multilinear.hpp"
#include "torelli/rng.hpp"

using namespace torelli;
using namespace torelli::exactalg;
using namespace torelli::multilinear;
using torelli::symplectic::SpLieElement;
using torelli::symplectic::gl_act;

namespace {

Ext3Vector random_vec(const Ext3Context& ctx, Rng& rng) {
  Ext3Vector v = Ext3Vector::zero(ctx);
  for (auto& c : v.coords) c = rng.below(ctx.p());
  return v;
}

SpLieElement random_sp(std::size_t g, std::int64_t p, Rng& rng) {
  ResidueMatrix gl(p, g, g), a(p, g, g), b(p, g, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      gl.set(i, j, rng.below(p));
      if (j >= i) {
        std::int64_t va = rng.below(p), vb = rng.below(p);
        a.set(i, j, va); a.set(j, i, va);
        b.set(i, j, vb); b.set(j, i, vb);
      }
    }
  return SpLieElement(g, gl, a, b);
}

std::int64_t theta_s3_sum(const Ext3Context& ctx, std::size_t rx, std::size_t ry) {
  static const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  static const int sgn[6] = {1, 1, 1, -1, -1, -1};
  const auto& a = ctx.triple(rx);
  const auto& b = ctx.triple(ry);
  std::int64_t acc = 0;
  for (int s = 0; s < 6; ++s) {
    std::int64_t t = sgn[s];
    for (int i = 0; i < 3; ++i) t *= omega_label(a[i], b[perm[s][i]], ctx.conventions());
    acc += t;
  }
  return ResidueMatrix::canonical(acc, ctx.p());
}

}  // namespace

TEST_CASE("omega on basis vectors") {
  Ext3Context ctx(3, 5);
  std::vector<std::int64_t> a1(6, 0), a2(6, 0), b1(6, 0);
  a1[label_a(0)] = 1;
  a2[label_a(1)] = 1;
  b1[label_b(0)] = 1;
  REQUIRE(omega(ctx, a1, a2) == 0);
  REQUIRE(omega(ctx, a1, b1) == ResidueMatrix::canonical(-1, 5));  // s_omega default -1
  REQUIRE(omega(ctx, b1, a1) == 1);
}

TEST_CASE("contraction: pinned examples") {
  Ext3Context ctx(3, 5);
  const int s = ctx.conventions().omega_sign;

  auto aaa = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_a(2));
  for (auto c : contract(ctx, aaa)) REQUIRE(c == 0);

  // a1 ^ a2 ^ b2 -> 2 s a1
  auto aab = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_b(1));
  auto ca = contract(ctx, aab);
  REQUIRE(ca[label_a(0)] == ResidueMatrix::canonical(2 * s, 5));
  for (std::size_t i = 1; i < 6; ++i) REQUIRE(ca[i] == 0);

  // b1 ^ a3 ^ b3 -> 2 s b1
  auto bab = Ext3Vector::wedge(ctx, label_b(0), label_a(2), label_b(2));
  auto cb = contract(ctx, bab);
  REQUIRE(cb[label_b(0)] == ResidueMatrix::canonical(2 * s, 5));
}

TEST_CASE("projections split the cube into the four Lagrangian parts") {
  Ext3Context ctx(3, 5);
  auto aaa = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_a(2));
  REQUIRE(pi_A(ctx, aaa).coords == aaa.coords);
  REQUIRE(pi_A2B(ctx, aaa).is_zero());

  auto aab = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_b(1));
  REQUIRE(pi_A(ctx, aab).is_zero());
  REQUIRE(pi_A2B(ctx, aab).coords == aab.coords);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    auto v = random_vec(ctx, rng);
    auto sum = Ext3Vector::zero(ctx);
    sum.add(ctx, pi_A(ctx, v)).add(ctx, pi_B(ctx, v)).add(ctx, pi_A2B(ctx, v)).add(ctx, pi_B2A(ctx, v));
    REQUIRE(sum.coords == v.coords);
  }
}

TEST_CASE("theta and q: pinned table entries under the default calibration") {
  Ext3Context ctx(3, 5);
  auto a123 = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_a(2));
  auto b123 = Ext3Vector::wedge(ctx, label_b(0), label_b(1), label_b(2));
  REQUIRE(theta_form(ctx, a123, b123) == ResidueMatrix::canonical(-1, 5));

  auto aab = Ext3Vector::wedge(ctx, label_a(0), label_a(1), label_b(1));
  auto bab3 = Ext3Vector::wedge(ctx, label_b(0), label_a(2), label_b(2));
  REQUIRE(q_form(ctx, aab, bab3) == ResidueMatrix::canonical(-4, 5));

  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    auto x = random_vec(ctx, rng);
    REQUIRE(q_form(ctx, x, x) == 0);
  }
}

TEST_CASE("theta via determinant equals the signed S3 sum") {
  for (std::size_t g : {2u, 3u}) {
    Ext3Context ctx(g, 7);
    for (std::size_t i = 0; i < ctx.dim(); ++i)
      for (std::size_t j = 0; j < ctx.dim(); ++j)
        REQUIRE(theta_basis(ctx, i, j) == theta_s3_sum(ctx, i, j));
  }
}

TEST_CASE("antisymmetry of theta and q on all basis pairs") {
  Ext3Context ctx(4, 5);
  for (std::size_t i = 0; i < ctx.dim(); ++i)
    for (std::size_t j = 0; j < ctx.dim(); ++j) {
      std::int64_t tij = theta_basis(ctx, i, j);
      std::int64_t tji = theta_basis(ctx, j, i);
      REQUIRE((tij + tji) % 5 == 0);
      auto ei = Ext3Vector::zero(ctx), ej = Ext3Vector::zero(ctx);
      ei.coords[i] = 1;
      ej.coords[j] = 1;
      REQUIRE((q_form(ctx, ei, ej) + q_form(ctx, ej, ei)) % 5 == 0);
    }
}

TEST_CASE("vanishing pattern of tJ") {
  Ext3Context ctx(3, 5);
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    auto x = random_vec(ctx, rng);
    auto y = random_vec(ctx, rng);
    if (pi_B(ctx, x).is_zero() || pi_A(ctx, y).is_zero()) REQUIRE(tJ_form(ctx, x, y) == 0);
    // projected variants always vanish
    auto xa = pi_A(ctx, x);
    REQUIRE(tJ_form(ctx, xa, y) == 0);
    auto yb = pi_B(ctx, y);
    REQUIRE(tJ_form(ctx, x, yb) == 0);
  }
}

TEST_CASE("sp forms: pinned values") {
  const std::size_t g = 3;
  const std::int64_t p = 5;
  auto zero = SpLieElement::zero(g, p);
  ResidueMatrix e11(p, g, g), zg(p, g, g);
  e11.set(0, 0, 1);
  SpLieElement n11(g, e11, zg, zg);   // gl block e11
  SpLieElement u11(g, zg, e11, zg);   // a block e11
  SpLieElement l11(g, zg, zg, e11);   // b block e11

  for (auto f : {T1_form, T2_form, K_form, tK_form}) {
    REQUIRE(f(zero, n11) == 0);
    REQUIRE(f(zero, u11) == 0);
  }
  REQUIRE(tK_form(l11, u11) == 1);
  REQUIRE(K_form(l11, u11) == 0);
  REQUIRE(K_form(u11, l11) == 1);
  REQUIRE(T2_form(n11, n11) == 1);
  REQUIRE(T1_form(n11, n11) == 1);
  // (tK - K)(l11, u11) = 1
  REQUIRE(ResidueMatrix::canonical(tK_form(l11, u11) - K_form(l11, u11), p) == 1);
}

TEST_CASE("vanishing pattern of tK") {
  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    auto x = random_sp(3, 5, rng);
    auto y = random_sp(3, 5, rng);
    if (x.b_block().is_zero() || y.a_block().is_zero()) REQUIRE(tK_form(x, y) == 0);
    SpLieElement xb0(3, x.gl_block(), x.a_block(), ResidueMatrix(5, 3, 3));
    REQUIRE(tK_form(xb0, y) == 0);
  }
}

TEST_CASE("GL invariance of all eight forms under the generator action") {
  const std::size_t g = 3;
  const std::int64_t p = 5;
  Ext3Context ctx(g, p);
  Rng rng(55);
  for (int t = 0; t < 200; ++t) {
    ResidueMatrix gm = torelli::symplectic::sample_gl_pm(g, p, rng);
    auto rho = h_action(ctx, gm);
    auto m = ext3_matrix(ctx, rho);
    auto x = random_vec(ctx, rng);
    auto y = random_vec(ctx, rng);
    auto gx = apply_matrix(ctx, m, x);
    auto gy = apply_matrix(ctx, m, y);
    REQUIRE(theta_form(ctx, gx, gy) == theta_form(ctx, x, y));
    REQUIRE(q_form(ctx, gx, gy) == q_form(ctx, x, y));
    REQUIRE(J_form(ctx, gx, gy) == J_form(ctx, x, y));
    REQUIRE(tJ_form(ctx, gx, gy) == tJ_form(ctx, x, y));

    auto xs = random_sp(g, p, rng);
    auto ys = random_sp(g, p, rng);
    auto gxs = gl_act(gm, xs);
    auto gys = gl_act(gm, ys);
    REQUIRE(T1_form(gxs, gys) == T1_form(xs, ys));
    REQUIRE(T2_form(gxs, gys) == T2_form(xs, ys));
    REQUIRE(K_form(gxs, gys) == K_form(xs, ys));
    REQUIRE(tK_form(gxs, gys) == tK_form(xs, ys));
  }
}
