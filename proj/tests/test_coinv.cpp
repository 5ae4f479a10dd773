#include <catch2/catch_amalgamated.hpp>

#include "torelli/spaces.hpp"

using namespace torelli;
using namespace torelli::exactalg;
using namespace torelli::coinv;

TEST_CASE("small Appendix spaces: gl, sl, sp, sym") {
  for (std::int64_t p : {5, 7}) {
    for (std::size_t g : {3u, 4u}) {
      auto gl = coinvariants("gl", g, p);
      REQUIRE(gl.quotient_dim == 1);
      REQUIRE(gl.generators_span);

      auto sl = coinvariants("sl", g, p);
      REQUIRE(sl.quotient_dim == 0);
      REQUIRE(sl.generators_span);

      auto sym = coinvariants("sym", g, p);
      REQUIRE(sym.quotient_dim == 0);

      auto sp = coinvariants("sp", g, p);
      REQUIRE(sp.quotient_dim == 1);
      REQUIRE(sp.generators_span);
    }
  }
}

TEST_CASE("SL variant keeps the trace class") {
  SpaceOptions opt;
  opt.variant = GroupVariant::SL;
  auto sp = coinvariants("sp", 3, 5, opt);
  REQUIRE(sp.quotient_dim == 1);
  REQUIRE(sp.generators_span);
  auto sl = coinvariants("sl", 3, 5, opt);
  REQUIRE(sl.quotient_dim == 0);
}

TEST_CASE("the exterior cube itself has vanishing coinvariants (-Id acts by -1)") {
  auto r = coinvariants("ext3", 3, 5);
  REQUIRE(r.quotient_dim == 0);
  auto r4 = coinvariants("ext3", 4, 5);
  REQUIRE(r4.quotient_dim == 0);
}

TEST_CASE("augmentation closure is a generator-stable fixed point") {
  for (const std::string space : {"gl", "sp", "sym", "ext3"}) {
    auto spec = build_space(space, 3, 5);
    FpSubspace w = augmentation_closure(spec);
    // stability: s * basis row stays inside; (s-1) * basis row stays inside
    Vec16 img;
    for (const auto& row : w.basis()) {
      for (const auto& gen : spec.generators) {
        gen->apply(to_vec16(row, 5), img);
        REQUIRE(w.contains(to_veci(img)));
      }
    }
    // re-closing the subspace is a fixed point
    FpSubspace again(5, spec.dim);
    for (const auto& row : w.basis()) again.insert(row);
    REQUIRE(again == w);
  }
}

TEST_CASE("quotient dimension is independent of generator ordering") {
  auto spec = build_space("sp", 3, 5);
  auto base = run_coinvariants(spec);
  std::reverse(spec.generators.begin(), spec.generators.end());
  auto rev = run_coinvariants(spec);
  REQUIRE(base.quotient_dim == rev.quotient_dim);
  REQUIRE(base.augmentation == rev.augmentation);
}

TEST_CASE("sp tensor square at g = 4: four generators span, forms give the pinned matrix") {
  auto rep = coinvariants("sp-tensor", 4, 5);
  REQUIRE(rep.quotient_dim == 4);
  REQUIRE(rep.generators_span);
  REQUIRE(rep.candidate_names.size() == 4);

  auto verdict = invariant_forms("sp-tensor", 4, 5);
  REQUIRE(verdict.all_invariant);
  REQUIRE(verdict.invertible);
  // rows T1, T2, K, tK against n11(x)n11, n11(x)n22, u11(x)l11, l11(x)u11
  std::vector<std::vector<std::int64_t>> expected = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  REQUIRE(verdict.evaluation == expected);

  // dropping one form: rank deficiency reported
  auto dropped = invariant_forms("sp-tensor", 4, 5, {},
                                 std::vector<std::string>{"T1", "T2", "K"});
  REQUIRE_FALSE(dropped.invertible);
}

TEST_CASE("sp wedge at g = 4: u11 ^ l11 generates") {
  auto rep = coinvariants("sp-wedge", 4, 5);
  REQUIRE(rep.quotient_dim == 1);
  REQUIRE(rep.generators_span);
  auto verdict = invariant_forms("sp-wedge", 4, 5);
  REQUIRE(verdict.invertible);
  // (tK - K)(l11 ^ u11) = 1, so the value on u11 ^ l11 is -1
  REQUIRE(verdict.evaluation ==
          std::vector<std::vector<std::int64_t>>{{ResidueMatrix::canonical(-1, 5)}});
}

TEST_CASE("tree algebra coinvariants at g = 4: the two trees generate") {
  auto rep = coinvariants("a2tree", 4, 5);
  REQUIRE(rep.quotient_dim == 2);
  REQUIRE(rep.generators_span);

  auto verdict = invariant_forms("a2tree", 4, 5);
  REQUIRE(verdict.all_invariant);
  REQUIRE(verdict.invertible);
  // d1, d2 against T(b1,b2|a1,a2), T(a1,b1|a2,b2)
  std::vector<std::vector<std::int64_t>> expected = {{1, 2}, {1, 0}};
  REQUIRE(verdict.evaluation == expected);
}

TEST_CASE("removing IHX inflates the tree quotient and breaks the span verdict") {
  SpaceOptions opt;
  opt.with_ihx = false;
  auto rep = coinvariants("a2tree", 4, 5, opt);
  bool mutated = rep.quotient_dim != 2 || !rep.generators_span;
  REQUIRE(mutated);
}

TEST_CASE("infeasible sizes are rejected with an estimate") {
  REQUIRE_THROWS_WITH(coinvariants("ext3-tensor", 6, 5),
                      Catch::Matchers::ContainsSubstring("exceeds the ceiling"));
  REQUIRE_THROWS_AS(coinvariants("nonsense", 4, 5), std::invalid_argument);
  REQUIRE_THROWS_AS(coinvariants("gl", 4, 11), std::invalid_argument);
}

TEST_CASE("ext3 tensor square at g = 3 is coherent (fast smoke)") {
  auto rep = coinvariants("ext3-tensor", 3, 5);
  // the six forms are independent invariant functionals for every g >= 3
  REQUIRE(rep.quotient_dim >= 6);
  REQUIRE(rep.ambient == 400);
  REQUIRE(rep.augmentation.rank() + rep.quotient_dim == rep.ambient);
}

TEST_CASE("ext3 tensor square at g = 4: six generators, six forms") {
  auto rep = coinvariants("ext3-tensor", 4, 5);
  REQUIRE(rep.ambient == 3136);
  REQUIRE(rep.quotient_dim == 6);
  REQUIRE(rep.generators_span);

  auto verdict = invariant_forms("ext3-tensor", 4, 5);
  REQUIRE(verdict.all_invariant);
  REQUIRE(verdict.invertible);
  // rows: theta(piA,piB), theta(piA2B,piB2A), q(piA2B,piB2A),
  //       theta(piB,piA), theta(piB2A,piA2B), q(piB2A,piA2B)
  auto c = [](std::int64_t v) { return ResidueMatrix::canonical(v, 5); };
  std::vector<std::vector<std::int64_t>> expected = {
      {c(-1), 0, 0, 0, 0, 0},    {0, 0, c(-1), 0, 0, 0}, {0, 0, c(-4), 0, c(-4), 0},
      {0, 1, 0, 0, 0, 0},        {0, 0, 0, 1, 0, 0},     {0, 0, 0, c(4), 0, c(4)}};
  REQUIRE(verdict.evaluation == expected);

  auto wedge = coinvariants("ext3-wedge", 4, 5);
  REQUIRE(wedge.quotient_dim == 3);
  REQUIRE(wedge.generators_span);
}
