#include <catch2/catch_amalgamated.hpp>

#include "torelli/cli.hpp"

#include <fstream>
#include <sstream>

using namespace torelli;

namespace {

struct RunOutcome {
  int code;
  std::string out, err;
};

RunOutcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

}  // namespace

TEST_CASE("lens command: pinned output") {
  auto r = run({"lens", "--d", "5", "--k", "2", "--l", "2"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "order = 11\nphi = 3\n");

  auto r2 = run({"lens", "--d", "7", "--k", "3", "--l", "1"});
  REQUIRE(r2.code == 0);
  REQUIRE(r2.out == "order = 22\nphi = 4\n");

  auto bad = run({"lens", "--d", "6", "--k", "1", "--l", "7"});
  REQUIRE(bad.code == 2);
  REQUIRE(bad.err.find("gcd") != std::string::npos);
}

TEST_CASE("homology command") {
  write_file("/tmp/torelli_id.txt", "genus 2\n4 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
  auto r = run({"homology", "--file", "/tmp/torelli_id.txt", "--bound", "9"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out ==
          "free_rank = 0\ntorsion = \norder = 1\nadmissible_levels = 2 3 4 5 6 7 8 9\n");

  write_file("/tmp/torelli_s1s2.txt", "genus 1\n2 2\n0 -1\n1 0\n");
  auto rinf = run({"homology", "--file", "/tmp/torelli_s1s2.txt"});
  REQUIRE(rinf.code == 0);
  REQUIRE(rinf.out.find("order = infinite") != std::string::npos);
}

TEST_CASE("invariant commands on matrix files") {
  write_file("/tmp/torelli_phi.txt", "genus 1 modulus 25\n2 2\n11 0\n0 16\n");
  auto r = run({"invariant", "phi", "--d", "5", "--file", "/tmp/torelli_phi.txt"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "phi = 2\n");

  write_file("/tmp/torelli_r.txt", "genus 1 modulus 125\n2 2 125\n16 0\n0 86\n");
  auto rr = run({"invariant", "r", "--p", "5", "--file", "/tmp/torelli_r.txt"});
  REQUIRE(rr.code == 0);
  REQUIRE(rr.out == "r = 1\n");

  // integral input is reduced automatically
  write_file("/tmp/torelli_int.txt", "2 2\n-4 5\n-5 6\n");
  auto ri = run({"invariant", "phi", "--d", "5", "--file", "/tmp/torelli_int.txt"});
  REQUIRE(ri.code == 0);
  REQUIRE(ri.out == "phi = 4\n");

  // wrong modulus is a usage error
  write_file("/tmp/torelli_wrong.txt", "genus 1 modulus 25\n2 2 25\n11 0\n0 16\n");
  auto bad = run({"invariant", "r", "--p", "5", "--file", "/tmp/torelli_wrong.txt"});
  REQUIRE(bad.code == 2);
}

TEST_CASE("form eval command") {
  multilinear::Ext3Context ctx(3, 5);
  auto write_coords = [&](const std::string& path, std::size_t x, std::size_t y, std::size_t z) {
    multilinear::Ext3Vector v = multilinear::Ext3Vector::wedge(ctx, x, y, z);
    std::ostringstream body;
    body << "1 " << ctx.dim() << "\n";
    for (auto c : v.coords) body << c << ' ';
    body << "\n";
    write_file(path, body.str());
  };
  using multilinear::label_a;
  using multilinear::label_b;
  write_coords("/tmp/torelli_x.txt", label_a(0), label_a(1), label_a(2));
  write_coords("/tmp/torelli_y.txt", label_b(0), label_b(1), label_b(2));
  auto r = run({"form", "eval", "--form", "theta", "--g", "3", "--p", "5", "--x",
                "/tmp/torelli_x.txt", "--y", "/tmp/torelli_y.txt"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "value = 4\n");

  // sp form on Lie-algebra matrices: tk(l11, u11) = 1 at g = 2
  write_file("/tmp/torelli_l11.txt", "4 4\n0 0 0 0\n0 0 0 0\n1 0 0 0\n0 0 0 0\n");
  write_file("/tmp/torelli_u11.txt", "4 4\n0 0 1 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n");
  auto rs = run({"form", "eval", "--form", "tk", "--g", "2", "--p", "5", "--x",
                 "/tmp/torelli_l11.txt", "--y", "/tmp/torelli_u11.txt"});
  REQUIRE(rs.code == 0);
  REQUIRE(rs.out == "value = 1\n");
}

TEST_CASE("coinv command") {
  auto r = run({"coinv", "--space", "gl", "--g", "3", "--p", "5"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("dimension = 1") != std::string::npos);
  REQUIRE(r.out.find("generators_span = true") != std::string::npos);
  REQUIRE(r.out.find("generator_0 = e11") != std::string::npos);

  auto bad = run({"coinv", "--space", "ext3-tensor", "--g", "6", "--p", "5"});
  REQUIRE(bad.code == 2);
  REQUIRE(bad.err.find("ceiling") != std::string::npos);
}

TEST_CASE("verify command is deterministic and reports PASS lines") {
  std::vector<std::string> args = {"verify", "invariants", "--g", "2", "--p", "5",
                                   "--trials", "60", "--seed", "11"};
  auto r1 = run(args);
  auto r2 = run(args);
  REQUIRE(r1.code == 0);
  REQUIRE(r1.out == r2.out);
  REQUIRE(r1.out.find("PASS invariants") != std::string::npos);

  auto sets = run({"verify", "sets"});
  REQUIRE(sets.code == 0);
  REQUIRE(sets.out.find("PASS sets") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run({"bogus"}).code == 2);
  REQUIRE(run({"invariant", "bogus", "--file", "/tmp/torelli_phi.txt"}).code == 2);
  REQUIRE(run({"homology", "--file", "/nonexistent/x"}).code == 2);
  REQUIRE(run({"verify", "bogus"}).code == 2);
}
