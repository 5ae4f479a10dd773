#pragma once

#include "torelli/invariants.hpp"
#include "torelli/spaces.hpp"

#include <cstdlib>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace torelli::verify {

using exactalg::Int;
using exactalg::IntMatrix;
using exactalg::ResidueMatrix;
using symplectic::SympElement;

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;

  void note(const std::string& key, const std::string& value) { lines.push_back(key + " = " + value); }
  void note(const std::string& key, std::int64_t value) { note(key, std::to_string(value)); }
  void fail(const std::string& why) {
    passed = false;
    lines.push_back("failure = " + why);
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

/// Lens-space values: phi of the level gluing for (d, k, l) is -k mod d,
/// for d in {5, 7}, every k, every admissible l, also after stabilizing.
inline SuiteResult suite_lens() {
  SuiteResult res{"lens"};
  std::size_t cases = 0;
  for (std::int64_t d : {5, 7}) {
    for (std::int64_t k = 0; k < d; ++k) {
      for (std::int64_t l = 1; l <= d; ++l) {
        if (exactalg::gcd64(1 + d * k, d * l) != 1) continue;
        auto lg = homology3::lens_level_gluing(d, k, l);
        SympElement x(1, ResidueMatrix::from_int(lg.matrix, d * d));
        std::int64_t want = ResidueMatrix::canonical(-k, d);
        ++cases;
        if (invariants::phi(x, d) != want || invariants::phi(symplectic::stabilize(x, 4), d) != want) {
          std::ostringstream os;
          os << "phi(L(1+" << d << "*" << k << ", " << d << "*" << l << ")) != " << want;
          res.fail(os.str());
        }
        Int n = homology3::order_h1(homology3::h1_of_splitting(homology3::HeegaardGluing(1, lg.matrix)));
        Int expect_n = 1 + d * k;
        if (n != (expect_n < 0 ? Int(-expect_n) : expect_n)) res.fail("lens order mismatch");
      }
    }
  }
  res.note("cases", static_cast<std::int64_t>(cases));
  return res;
}

/// Random integral symplectic gluings: order = |det H| and the double-coset
/// trivialization succeeds exactly at the admissible levels.
inline SuiteResult suite_homology(std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"homology"};
  Rng rng = Rng(seed).child(2);
  std::size_t rational = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t g = 1 + rng.below(3);
    IntMatrix x = homology3::random_integral_symplectic(g, rng);
    homology3::HeegaardGluing hg(g, x);
    Int dh = exactalg::det(hg.block_H());
    auto rep = homology3::h1_of_splitting(hg);
    if (dh == 0) {
      res.expect(rep.free_rank > 0, "zero det but finite homology");
      continue;
    }
    ++rational;
    Int n = homology3::order_h1(rep);
    res.expect(n == (dh < 0 ? Int(-dh) : dh), "order != |det H|");
    res.expect(!homology3::admissible_levels(n, static_cast<std::int64_t>(n) + 2).empty(),
               "no admissible level found");
    for (std::int64_t d : {2, 3, 5, 7, 9}) {
      SympElement xm(g, ResidueMatrix::from_int(x, d));
      bool admissible = (n - 1) % d == 0 || (n + 1) % d == 0;
      bool ok;
      try {
        auto [xa, yb] = homology3::trivialize_mod_d(xm);
        ok = (xa * xm * yb).body() == ResidueMatrix::identity(d, 2 * g) &&
             xa.block_F() == xa.block_F().transposed();
      } catch (const homology3::InadmissibleError&) {
        ok = false;
      }
      res.expect(ok == admissible, "trivialization does not match the divisibility criterion");
    }
    if (!res.passed) break;
  }
  res.note("rational_samples", static_cast<std::int64_t>(rational));
  return res;
}

/// The coincidence criterion over d <= 1000.
inline SuiteResult suite_sets() {
  SuiteResult res{"sets"};
  for (std::int64_t d = 2; d <= 1000; ++d) {
    bool want = d == 2 || d == 3 || d == 4 || d == 6;
    if (homology3::sets_coincide(d) != want) res.fail("sets_coincide wrong at d = " + std::to_string(d));
  }
  res.note("levels_checked", 999);
  return res;
}

/// alpha is a homomorphism and GL-equivariant, d in {5, 6, 7, 10} mod d^2.
inline SuiteResult suite_alpha(std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"alpha"};
  Rng rng = Rng(seed).child(3);
  for (std::int64_t d : {5, 6, 7, 10}) {
    for (std::size_t t = 0; t < trials; ++t) {
      std::size_t g = 1 + rng.below(3);
      auto x = symplectic::sample_level_sq(g, d, rng);
      auto y = symplectic::sample_level_sq(g, d, rng);
      if (!(symplectic::alpha(x * y, d) == symplectic::alpha(x, d) + symplectic::alpha(y, d))) {
        res.fail("alpha not additive at d = " + std::to_string(d));
        break;
      }
      if (t % 4 == 0) {
        ResidueMatrix gm = symplectic::sample_gl_pm(g, d * d, rng);
        auto conj = symplectic::embed_gl(gm) * x * symplectic::embed_gl(gm).inverse();
        if (!(symplectic::alpha(conj, d) ==
              symplectic::gl_act(gm.reduced(d), symplectic::alpha(x, d)))) {
          res.fail("alpha not equivariant at d = " + std::to_string(d));
          break;
        }
      }
    }
  }
  res.note("trials_per_level", static_cast<std::int64_t>(trials));
  return res;
}

/// The invariance suite (vanishing, conjugation, double cosets,
/// stabilization, coboundary identity).
inline SuiteResult suite_invariance(std::size_t g, std::int64_t p, std::size_t trials,
                                    std::uint64_t seed, bool drop_half_term = false) {
  SuiteResult res{"invariants"};
  invariants::SuiteConfig cfg;
  cfg.g = g;
  cfg.p = p;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.drop_half_term = drop_half_term;
  auto rep = invariants::run_invariance_suite(cfg);
  for (const auto& c : rep.checks) {
    res.note(c.name, c.passed() ? "pass" : "FAIL [" + c.first_failure + "]");
    if (!c.passed()) res.passed = false;
  }
  return res;
}

/// coboundary(R) = cocycle_of_r pointwise over (g, p) in {2,3,4} x {5,7}.
inline SuiteResult suite_cocycle(std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"cocycle"};
  Rng rng = Rng(seed).child(4);
  for (std::int64_t p : {5, 7}) {
    for (std::size_t g : {2u, 3u, 4u}) {
      std::size_t bad = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        auto x = symplectic::sample_level(g, p, rng);
        auto y = symplectic::sample_level(g, p, rng);
        auto f = [&](const SympElement& z) { return invariants::r_invariant(z, p); };
        if (invariants::cocycle_of_r(x, y, p) != invariants::coboundary(f, x, y, p)) ++bad;
      }
      std::ostringstream key;
      key << "coboundary-identity(g=" << g << ",p=" << p << ")";
      res.note(key.str(), bad == 0 ? "pass" : "FAIL");
      if (bad != 0) res.passed = false;
    }
  }
  return res;
}

/// Appendix coinvariants at (g, p): dimensions and spanning verdicts.
inline SuiteResult suite_coinv(std::size_t g, std::int64_t p) {
  SuiteResult res{"coinv"};
  auto check = [&](const std::string& space, std::size_t want_dim, const coinv::SpaceOptions& opt = {}) {
    auto rep = coinv::coinvariants(space, g, p, opt);
    std::ostringstream val;
    val << "dim " << rep.quotient_dim << (rep.generators_span ? ", generators span" : ", SPAN FAILS");
    res.note(space, val.str());
    res.expect(rep.quotient_dim == want_dim, space + ": unexpected dimension");
    res.expect(rep.generators_span, space + ": listed generators do not span");
    res.expect(rep.augmentation.rank() + rep.quotient_dim == rep.ambient,
               space + ": rank bookkeeping broken");
  };
  check("sl", 0);
  check("gl", 1);
  check("sym", 0);
  check("sp", 1);
  check("ext3", 0);
  coinv::SpaceOptions sl_variant;
  sl_variant.variant = coinv::GroupVariant::SL;
  {
    auto rep = coinv::coinvariants("sp", g, p, sl_variant);
    res.note("sp (SL variant)", static_cast<std::int64_t>(rep.quotient_dim));
    res.expect(rep.quotient_dim == 1, "sp SL-variant dimension");
  }
  check("ext3-tensor", 6);
  check("ext3-wedge", 3);
  check("sp-tensor", 4);
  check("sp-wedge", 1);
  check("a2tree", 2);
  return res;
}

/// Form bases: the 6x6, 4x4 and 2x2 evaluation matrices are invertible.
inline SuiteResult suite_forms(std::size_t g) {
  SuiteResult res{"forms"};
  for (std::int64_t p : {5, 7}) {
    auto v6 = coinv::invariant_forms("ext3-tensor", g, p);
    res.note("ext3 6x6 invertible mod " + std::to_string(p), v6.invertible ? "true" : "false");
    res.expect(v6.invertible && v6.all_invariant, "6x6 form basis fails");

    auto v4 = coinv::invariant_forms("sp-tensor", g, p);
    res.note("sp 4x4 invertible mod " + std::to_string(p), v4.invertible ? "true" : "false");
    res.expect(v4.invertible && v4.all_invariant, "4x4 form basis fails");

    auto v2 = coinv::invariant_forms("a2tree", g, p);
    res.note("tree 2x2 invertible mod " + std::to_string(p), v2.invertible ? "true" : "false");
    res.expect(v2.invertible && v2.all_invariant, "2x2 form basis fails");
  }
  return res;
}

namespace detail {

struct TableRow {
  std::array<std::size_t, 3> x, y;
  std::int64_t d1v, d2v, theta, q, tjj;
};

inline bool tree_table_matches(const Conventions& conv, std::int64_t p,
                               std::vector<std::string>* lines = nullptr) {
  using multilinear::label_a;
  using multilinear::label_b;
  const TableRow table[3] = {
      {{label_a(0), label_a(1), label_a(2)}, {label_b(0), label_b(1), label_b(2)}, 3, 3, -1, 0, -1},
      {{label_a(0), label_a(1), label_b(1)}, {label_b(0), label_a(1), label_b(1)}, 5, -1, -1, -4, 0},
      {{label_a(0), label_a(1), label_b(1)}, {label_b(0), label_a(2), label_b(2)}, 2, 0, 0, -4, 0},
  };
  multilinear::Ext3Context ext(3, p, conv);
  trees::TreeContext ctx(3, p, conv);
  bool ok = true;
  int row_idx = 0;
  for (const auto& row : table) {
    auto x = multilinear::Ext3Vector::wedge(ext, row.x[0], row.x[1], row.x[2]);
    auto y = multilinear::Ext3Vector::wedge(ext, row.y[0], row.y[1], row.y[2]);
    auto br = trees::bracket(ctx, ext, x, y);
    auto want = [&](std::int64_t v) { return ResidueMatrix::canonical(v, p); };
    std::int64_t vals[5] = {trees::d1(ctx, br), trees::d2(ctx, br),
                            multilinear::theta_form(ext, x, y), multilinear::q_form(ext, x, y),
                            ResidueMatrix::canonical(
                                multilinear::tJ_form(ext, x, y) - multilinear::J_form(ext, x, y), p)};
    std::int64_t wants[5] = {want(row.d1v), want(row.d2v), want(row.theta), want(row.q),
                             want(row.tjj)};
    for (int c = 0; c < 5; ++c)
      if (vals[c] != wants[c]) ok = false;
    if (lines) {
      std::ostringstream os;
      os << vals[0] << ' ' << vals[1] << ' ' << vals[2] << ' ' << vals[3] << ' ' << vals[4];
      lines->push_back("table_row_" + std::to_string(++row_idx) + " = " + os.str());
    }
  }
  return ok;
}

}  // namespace detail

/// The fifteen table entries and the two linear identities of the bracket on
/// all basis pairs.
inline SuiteResult suite_trees(std::size_t g, std::int64_t p) {
  SuiteResult res{"trees"};
  res.expect(detail::tree_table_matches(Conventions(), p, &res.lines),
             "table entries do not match under the shipped calibration");

  multilinear::Ext3Context ext(g, p, Conventions());
  trees::TreeContext ctx(g, p, Conventions());
  for (const auto& row : ctx.relation_subspace().basis())
    if (ctx.eval_d1(row) != 0 || ctx.eval_d2(row) != 0) {
      res.fail("d1/d2 not well defined on the relation subspace");
      break;
    }
  const std::int64_t half = (p + 1) / 2;
  bool identities = true;
  for (std::size_t i = 0; i < ext.dim() && identities; ++i) {
    multilinear::Ext3Vector x = multilinear::Ext3Vector::zero(ext);
    x.coords[i] = 1;
    for (std::size_t j = 0; j < ext.dim(); ++j) {
      multilinear::Ext3Vector y = multilinear::Ext3Vector::zero(ext);
      y.coords[j] = 1;
      auto br = trees::bracket(ctx, ext, x, y);
      std::int64_t th = multilinear::theta_basis(ext, i, j);
      std::int64_t qv = multilinear::q_form(ext, x, y);
      std::int64_t tjj = ResidueMatrix::canonical(
          multilinear::tJ_form(ext, x, y) - multilinear::J_form(ext, x, y), p);
      if (trees::d1(ctx, br) != ResidueMatrix::canonical(-3 * th - half * qv, p) ||
          trees::d2(ctx, br) != ResidueMatrix::canonical(th - 4 * tjj, p)) {
        identities = false;
        break;
      }
    }
  }
  res.expect(identities, "bracket linear identities fail on a basis pair");
  res.note("basis_pairs", static_cast<std::int64_t>(ext.dim() * ext.dim()));
  return res;
}

/// Mutation sensitivity: each deliberate corruption must break a suite.
inline SuiteResult suite_mutations(std::size_t trials, std::uint64_t seed) {
  SuiteResult res{"mutations"};

  auto broken = suite_invariance(2, 5, trials, seed, /*drop_half_term=*/true);
  res.note("drop-half-term-detected", broken.passed ? "NO" : "yes");
  res.expect(!broken.passed, "dropping the 1/2 term went unnoticed");

  bool flipped_table = detail::tree_table_matches(Conventions(1, -1), 5) ||
                       detail::tree_table_matches(Conventions(1, 1), 5);
  res.note("omega-sign-flip-detected", flipped_table ? "NO" : "yes");
  res.expect(!flipped_table, "flipping the omega sign went unnoticed");

  coinv::SpaceOptions no_ihx;
  no_ihx.with_ihx = false;
  auto rep = coinv::coinvariants("a2tree", 4, 5, no_ihx);
  bool ihx_detected = rep.quotient_dim != 2 || !rep.generators_span;
  res.note("ihx-removal-detected", ihx_detected ? "yes" : "NO");
  res.expect(ihx_detected, "removing IHX went unnoticed");
  return res;
}

struct RunAllConfig {
  std::size_t g = 4;
  std::int64_t p = 5;
  std::size_t trials = 1000;
  std::uint64_t seed = 7;
};

inline unsigned thread_cap() {
  if (const char* env = std::getenv("TORELLI_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Every suite, evaluated (possibly concurrently) and reported in a fixed
/// order; output is independent of the thread count.
inline std::vector<SuiteResult> run_all(const RunAllConfig& cfg) {
  std::vector<std::function<SuiteResult()>> tasks = {
      [&] { return suite_lens(); },
      [&] { return suite_homology(cfg.trials, cfg.seed); },
      [&] { return suite_sets(); },
      [&] { return suite_alpha(cfg.trials, cfg.seed); },
      [&] { return suite_invariance(cfg.g, cfg.p, cfg.trials, cfg.seed); },
      [&] { return suite_cocycle(cfg.trials, cfg.seed); },
      [&] { return suite_coinv(4, 5); },
      [&] { return suite_forms(4); },
      [&] { return suite_trees(4, 5); },
      [&] { return suite_mutations(std::min<std::size_t>(cfg.trials, 200), cfg.seed); },
  };
  std::vector<SuiteResult> results(tasks.size());
  const unsigned cap = thread_cap();
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::size_t batch = std::min<std::size_t>(cap, tasks.size() - next);
    std::vector<std::future<SuiteResult>> futs;
    for (std::size_t i = 0; i < batch; ++i)
      futs.push_back(std::async(std::launch::async, tasks[next + i]));
    for (std::size_t i = 0; i < batch; ++i) results[next + i] = futs[i].get();
    next += batch;
  }
  return results;
}

}  // namespace torelli::verify
