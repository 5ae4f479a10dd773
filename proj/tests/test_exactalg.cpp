#include <catch2/catch_amalgamated.hpp>

#include "torelli/exact_int.hpp"
#include "torelli/fp_linear.hpp"
#include "torelli/io.hpp"
#include "torelli/residue.hpp"
#include "torelli/rng.hpp"

#include <sstream>

using namespace torelli;
using namespace torelli::exactalg;

namespace {

IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  IntMatrix m(r, c);
  std::size_t i = 0;
  for (auto& row : rows) {
    std::size_t j = 0;
    for (auto v : row) m.at(i, j++) = v;
    ++i;
  }
  return m;
}

IntMatrix random_int_matrix(Rng& rng, std::size_t r, std::size_t c, int bound) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m.at(i, j) = static_cast<long long>(rng.below(2 * bound + 1)) - bound;
  return m;
}

void check_smith(const IntMatrix& a) {
  auto s = smith_normal_form(a);
  REQUIRE(s.U * s.D * s.V == a);
  Int du = det(s.U), dv = det(s.V);
  REQUIRE((du == 1 || du == -1));
  REQUIRE((dv == 1 || dv == -1));
  std::size_t steps = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < steps; ++i)
    for (std::size_t j = 0; j < steps; ++j)
      if (i != j) REQUIRE(s.D.at(i, j) == 0);
  for (std::size_t i = 0; i + 1 < s.invariant_factors.size(); ++i) {
    REQUIRE(s.invariant_factors[i] > 0);
    REQUIRE(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0);
  }
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
  auto id3 = smith_normal_form(IntMatrix::identity(3));
  REQUIRE(id3.invariant_factors == std::vector<Int>{1, 1, 1});
  REQUIRE(id3.D == IntMatrix::identity(3));

  auto d23 = smith_normal_form(from_rows({{2, 0}, {0, 3}}));
  REQUIRE(d23.invariant_factors == std::vector<Int>{1, 6});

  auto z = smith_normal_form(from_rows({{0}}));
  REQUIRE(z.invariant_factors.empty());
  REQUIRE(z.D.at(0, 0) == 0);
}

TEST_CASE("smith normal form: reconstruction on random matrices") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
    check_smith(random_int_matrix(rng, r, c, 9));
  }
  // matrices with zero rows / structured kernels
  check_smith(from_rows({{0, 0, 0}, {2, 4, 6}, {1, 2, 3}}));
  check_smith(from_rows({{4, 6}, {6, 9}}));
}

TEST_CASE("determinant") {
  REQUIRE(det(IntMatrix::identity(4)) == 1);
  REQUIRE(det(from_rows({{2, 0}, {0, 3}})) == 6);
  REQUIRE(det(from_rows({{1, 2}, {3, 4}})) == -2);
  REQUIRE_THROWS_AS(det(IntMatrix(2, 3)), std::invalid_argument);

  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + rng.below(5);
    IntMatrix a = random_int_matrix(rng, n, n, 7);
    auto s = smith_normal_form(a);
    Int prod = 1;
    for (auto& f : s.invariant_factors) prod *= f;
    Int d = det(a);
    if (s.invariant_factors.size() == n)
      REQUIRE(prod == (d < 0 ? Int(-d) : d));
    else
      REQUIRE(d == 0);
  }
}

TEST_CASE("inverse_mod: pinned examples and error") {
  auto id5 = ResidueMatrix::identity(5, 3);
  REQUIRE(inverse_mod(id5) == id5);

  ResidueMatrix two(5, 1, 1);
  two.set(0, 0, 2);
  REQUIRE(inverse_mod(two).at(0, 0) == 3);

  ResidueMatrix five(25, 1, 1);
  five.set(0, 0, 5);
  REQUIRE_THROWS_AS(inverse_mod(five), NonInvertibleError);
}

TEST_CASE("inverse_mod: random invertible matrices over several moduli") {
  Rng rng(99);
  for (std::int64_t m : {5, 7, 25, 49, 125, 343, 6, 10, 36, 100}) {
    for (std::size_t n : {1, 2, 3, 4}) {
      int found = 0;
      while (found < 25) {
        IntMatrix a = random_int_matrix(rng, n, n, static_cast<int>(m));
        ResidueMatrix r = ResidueMatrix::from_int(a, m);
        Int d = det(a) % m;
        if (d < 0) d += m;
        if (gcd64(static_cast<std::int64_t>(d), m) != 1) continue;
        ++found;
        auto inv = inverse_mod(r);
        REQUIRE(r * inv == ResidueMatrix::identity(m, n));
        REQUIRE(inv * r == ResidueMatrix::identity(m, n));
      }
    }
  }
}

TEST_CASE("residue matrices reject mixed moduli") {
  ResidueMatrix a(5, 2, 2), b(7, 2, 2);
  REQUIRE_THROWS_AS(a * b, std::invalid_argument);
  REQUIRE_THROWS_AS(a + b, std::invalid_argument);
}

TEST_CASE("subspace closure and quotient dimension") {
  // {} in dim 3 -> rank 0, quotient 3
  auto empty = subspace_closure({}, 3, 5);
  REQUIRE(empty.rank() == 0);
  REQUIRE(quotient_dim(3, empty) == 3);

  // {e1, e1+e2} in dim 3 over F5 -> rank 2, quotient 1
  auto s = subspace_closure({{1, 0, 0}, {1, 1, 0}}, 3, 5);
  REQUIRE(s.rank() == 2);
  REQUIRE(quotient_dim(3, s) == 1);

  // {e1, 2e1} -> rank 1
  auto t = subspace_closure({{1, 0, 0}, {2, 0, 0}}, 3, 5);
  REQUIRE(t.rank() == 1);

  REQUIRE_THROWS_AS(s.contains({1, 0}), std::invalid_argument);
}

TEST_CASE("subspace closure is idempotent") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t dim = 2 + rng.below(7);
    std::vector<std::vector<std::int64_t>> vecs;
    for (int k = 0; k < 5; ++k) {
      std::vector<std::int64_t> v(dim);
      for (auto& x : v) x = rng.below(5);
      vecs.push_back(v);
    }
    auto s = subspace_closure(vecs, dim, 5);
    auto again = subspace_closure(s.basis(), dim, 5);
    REQUIRE(s == again);
  }
}

TEST_CASE("matrix text format round trip") {
  IntMatrix a = from_rows({{1, -2, 3}, {4, 5, -6}});
  std::ostringstream out;
  write_matrix(out, a);
  std::istringstream in("# a comment\n" + out.str());
  auto f = read_matrix_file(in);
  REQUIRE_FALSE(f.genus.has_value());
  REQUIRE_FALSE(f.modulus.has_value());
  REQUIRE(f.entries == a);

  std::istringstream in2("genus 2 modulus 25\n# block\n1 1\n7\n");
  auto g = read_matrix_file(in2);
  REQUIRE(g.genus == 2);
  REQUIRE(g.header_modulus == 25);
  REQUIRE(g.entries.at(0, 0) == 7);
}
