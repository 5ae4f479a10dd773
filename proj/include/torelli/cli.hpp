#pragma once

#include "torelli/io.hpp"
#include "torelli/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace torelli::cli {

using exactalg::Int;
using exactalg::IntMatrix;
using exactalg::MatrixFile;
using exactalg::ResidueMatrix;
using symplectic::SympElement;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline MatrixFile load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  return exactalg::read_matrix_file(in);
}

/// Load a symplectic element reduced to exactly `modulus`. Integral inputs
/// are reduced; modular inputs must carry a modulus that `modulus` divides.
inline SympElement load_symp(const MatrixFile& f, std::int64_t modulus) {
  const std::size_t n = f.entries.rows();
  if (n != f.entries.cols() || n % 2 != 0) throw UsageError("matrix must be 2g x 2g");
  const std::size_t g = f.genus.value_or(n / 2);
  if (2 * g != n) throw UsageError("genus header contradicts the matrix size");
  std::optional<std::int64_t> m = f.modulus ? f.modulus : f.header_modulus;
  if (m && *m % modulus != 0)
    throw UsageError("file modulus " + std::to_string(*m) + " is not divisible by the required " +
                     std::to_string(modulus));
  return SympElement(g, ResidueMatrix::from_int(f.entries, modulus));
}

inline int cmd_homology(const std::string& path, std::int64_t bound, std::ostream& out) {
  MatrixFile f = load_file(path);
  const std::size_t n = f.entries.rows();
  if (n != f.entries.cols() || n % 2 != 0) throw UsageError("matrix must be 2g x 2g");
  const std::size_t g = f.genus.value_or(n / 2);
  if (f.modulus || f.header_modulus) throw UsageError("homology expects an integral gluing");
  homology3::HeegaardGluing hg(g, f.entries);
  auto rep = homology3::h1_of_splitting(hg);

  std::ostringstream tor;
  for (std::size_t i = 0; i < rep.torsion_coefficients.size(); ++i) {
    if (i) tor << ' ';
    tor << rep.torsion_coefficients[i];
  }
  out << "free_rank = " << rep.free_rank << '\n';
  out << "torsion = " << tor.str() << '\n';
  if (rep.order) {
    out << "order = " << *rep.order << '\n';
    std::ostringstream lv;
    auto levels = homology3::admissible_levels(*rep.order, bound);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (i) lv << ' ';
      lv << levels[i];
    }
    out << "admissible_levels = " << lv.str() << '\n';
  } else {
    out << "order = infinite\n";
  }
  return 0;
}

inline int cmd_invariant(const std::string& kind, std::int64_t d, std::int64_t p,
                         const std::string& path, std::ostream& out) {
  MatrixFile f = load_file(path);
  if (kind == "phi") {
    if (d < 2) throw UsageError("invariant phi requires --d");
    SympElement x = load_symp(f, d * d);
    out << "phi = " << invariants::phi(x, d) << '\n';
  } else if (kind == "r") {
    if (p < 2) throw UsageError("invariant r requires --p");
    SympElement x = load_symp(f, p * p * p);
    out << "r = " << invariants::r_invariant(x, p) << '\n';
  } else {
    throw UsageError("unknown invariant kind: " + kind);
  }
  return 0;
}

inline int cmd_lens(std::int64_t d, std::int64_t k, std::int64_t l, std::optional<std::int64_t> p,
                    std::ostream& out) {
  auto lg = homology3::lens_level_gluing(d, k, l);
  Int order = 1 + Int(d) * k;
  if (order < 0) order = -order;
  out << "order = " << order << '\n';
  SympElement x(1, ResidueMatrix::from_int(lg.matrix, d * d));
  out << "phi = " << invariants::phi(x, d) << '\n';
  if (p) {
    if (*p != d) throw UsageError("--p must equal --d for the level gluing");
    SympElement xp(1, ResidueMatrix::from_int(lg.matrix, *p * *p * *p));
    out << "r = " << invariants::r_invariant(xp, *p) << '\n';
  }
  return 0;
}

inline int cmd_coinv(const std::string& space, std::size_t g, std::int64_t p, std::ostream& out) {
  auto rep = coinv::coinvariants(space, g, p);
  out << "space = " << rep.space << '\n';
  out << "ambient = " << rep.ambient << '\n';
  out << "dimension = " << rep.quotient_dim << '\n';
  out << "generators_span = " << (rep.generators_span ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < rep.candidate_names.size(); ++i) {
    out << "generator_" << i << " = " << rep.candidate_names[i] << '\n';
    out << "generator_" << i << "_coords =";
    for (auto c : rep.candidate_images[i]) out << ' ' << c;
    out << '\n';
  }
  return 0;
}

inline int cmd_form_eval(const std::string& form, std::size_t g, std::int64_t p,
                         const std::string& xpath, const std::string& ypath, std::ostream& out) {
  MatrixFile fx = load_file(xpath), fy = load_file(ypath);
  std::int64_t value = 0;
  if (form == "theta" || form == "q" || form == "j" || form == "tj") {
    multilinear::Ext3Context ctx(g, p);
    auto to_vec = [&](const MatrixFile& f) {
      if (f.entries.rows() * f.entries.cols() != ctx.dim())
        throw UsageError("coordinate vector must have length C(2g,3)");
      multilinear::Ext3Vector v = multilinear::Ext3Vector::zero(ctx);
      for (std::size_t i = 0; i < ctx.dim(); ++i) {
        Int e = f.entries.at(i / f.entries.cols(), i % f.entries.cols()) % p;
        if (e < 0) e += p;
        v.coords[i] = static_cast<std::int64_t>(e);
      }
      return v;
    };
    auto x = to_vec(fx), y = to_vec(fy);
    if (form == "theta") value = multilinear::theta_form(ctx, x, y);
    if (form == "q") value = multilinear::q_form(ctx, x, y);
    if (form == "j") value = multilinear::J_form(ctx, x, y);
    if (form == "tj") value = multilinear::tJ_form(ctx, x, y);
  } else if (form == "t1" || form == "t2" || form == "k" || form == "tk") {
    auto to_sp = [&](const MatrixFile& f) {
      if (f.entries.rows() != 2 * g || f.entries.cols() != 2 * g)
        throw UsageError("sp element must be a 2g x 2g matrix");
      ResidueMatrix m = ResidueMatrix::from_int(f.entries, p);
      ResidueMatrix al = m.block(0, 0, g, g), be = m.block(0, g, g, g), ga = m.block(g, 0, g, g),
                    de = m.block(g, g, g, g);
      ResidueMatrix zero(p, g, g);
      if (!(de == zero - al.transposed()))
        throw UsageError("matrix is not in the symplectic Lie algebra (delta != -t(alpha))");
      return symplectic::SpLieElement(g, al, be, ga);
    };
    auto x = to_sp(fx), y = to_sp(fy);
    if (form == "t1") value = multilinear::T1_form(x, y);
    if (form == "t2") value = multilinear::T2_form(x, y);
    if (form == "k") value = multilinear::K_form(x, y);
    if (form == "tk") value = multilinear::tK_form(x, y);
  } else {
    throw UsageError("unknown form: " + form);
  }
  out << "value = " << value << '\n';
  return 0;
}

inline int cmd_verify(const std::string& suite, const verify::RunAllConfig& cfg, std::ostream& out) {
  std::vector<verify::SuiteResult> results;
  if (suite == "all") {
    results = verify::run_all(cfg);
  } else if (suite == "lens") {
    results.push_back(verify::suite_lens());
  } else if (suite == "homology") {
    results.push_back(verify::suite_homology(cfg.trials, cfg.seed));
  } else if (suite == "sets") {
    results.push_back(verify::suite_sets());
  } else if (suite == "alpha") {
    results.push_back(verify::suite_alpha(cfg.trials, cfg.seed));
  } else if (suite == "invariants") {
    results.push_back(verify::suite_invariance(cfg.g, cfg.p, cfg.trials, cfg.seed));
  } else if (suite == "cocycle") {
    results.push_back(verify::suite_cocycle(cfg.trials, cfg.seed));
  } else if (suite == "coinv") {
    results.push_back(verify::suite_coinv(cfg.g, cfg.p));
  } else if (suite == "forms") {
    results.push_back(verify::suite_forms(cfg.g));
  } else if (suite == "trees") {
    results.push_back(verify::suite_trees(cfg.g, cfg.p));
  } else if (suite == "mutations") {
    results.push_back(verify::suite_mutations(std::min<std::size_t>(cfg.trials, 200), cfg.seed));
  } else {
    throw UsageError("unknown suite: " + suite);
  }
  bool all = true;
  for (const auto& r : results) {
    for (const auto& line : r.lines) out << r.name << "." << line << '\n';
    out << (r.passed ? "PASS " : "FAIL ") << r.name << '\n';
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

/// Build and run the command-line interface; returns the process exit code
/// (0 success, 1 verification failure, 2 usage/parse error).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact mod-d invariants of rational homology spheres from Heegaard gluings"};
  app.require_subcommand(1);

  std::string file, xfile, yfile, space = "sp", form, kind, suite = "all";
  std::size_t g = 4;
  std::int64_t d = 0, p = 0, k = 0, l = 1, bound = 12;
  std::size_t trials = 1000;
  std::uint64_t seed = 7;

  auto* homology = app.add_subcommand("homology", "first homology of a Heegaard gluing");
  homology->add_option("--file", file)->required();
  homology->add_option("--bound", bound);

  auto* invariant = app.add_subcommand("invariant", "evaluate phi or the r invariant");
  invariant->add_option("kind", kind, "phi or r")->required();
  invariant->add_option("--d", d);
  invariant->add_option("--p", p);
  invariant->add_option("--file", file)->required();

  auto* lens = app.add_subcommand("lens", "level gluing of a Lens space and its invariants");
  lens->add_option("--d", d)->required();
  lens->add_option("--k", k)->required();
  lens->add_option("--l", l)->required();
  bool p_given = false;
  lens->add_option("--p", p)->each([&](const std::string&) { p_given = true; });

  auto* coinv_cmd = app.add_subcommand("coinv", "brute-force coinvariant computation");
  coinv_cmd->add_option("--space", space)->required();
  coinv_cmd->add_option("--g", g);
  coinv_cmd->add_option("--p", p)->required();

  auto* form_cmd = app.add_subcommand("form", "evaluate an invariant bilinear form");
  std::string action;
  form_cmd->add_option("action", action, "eval")->required();
  form_cmd->add_option("--form", form)->required();
  form_cmd->add_option("--g", g)->required();
  form_cmd->add_option("--p", p)->required();
  form_cmd->add_option("--x", xfile)->required();
  form_cmd->add_option("--y", yfile)->required();

  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite,
                         "lens|homology|sets|alpha|invariants|cocycle|coinv|forms|trees|mutations|all");
  verify_cmd->add_option("--g", g);
  verify_cmd->add_option("--p", p);
  verify_cmd->add_option("--trials", trials);
  verify_cmd->add_option("--seed", seed);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*homology) return cmd_homology(file, bound, out);
    if (*invariant) return cmd_invariant(kind, d, p, file, out);
    if (*lens) return cmd_lens(d, k, l, p_given ? std::optional<std::int64_t>(p) : std::nullopt, out);
    if (*coinv_cmd) return cmd_coinv(space, g, p, out);
    if (*form_cmd) {
      if (action != "eval") throw UsageError("unknown form action: " + action);
      return cmd_form_eval(form, g, p, xfile, yfile, out);
    }
    if (*verify_cmd) {
      verify::RunAllConfig cfg;
      cfg.g = g;
      cfg.p = p > 0 ? p : 5;
      cfg.trials = trials;
      cfg.seed = seed;
      return cmd_verify(suite, cfg, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace torelli::cli
