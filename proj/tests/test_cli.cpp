#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "cli_util.hpp"

namespace {

const char* kTwoEdges = "4\n0 1 0 0\n1 0 0 0\n0 0 0 1\n0 0 1 0\n";
const char* kK3 = "3\n0 1 1\n1 0 1\n1 1 0\n";

bool has_line(const std::string& out, const std::string& prefix) {
  return out.find("\n" + prefix) != std::string::npos || out.rfind(prefix, 0) == 0;
}

std::string line_after(const std::string& out, const std::string& prefix) {
  const std::size_t p = out.find("\n" + prefix);
  if (p == std::string::npos) return {};
  const std::size_t s = p + 1 + prefix.size();
  return out.substr(s, out.find('\n', s) - s);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cluster") {
    cli::TempDir dir;
    const cli::Run r = cli::run("cluster " + dir.write("e.txt", kTwoEdges));
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# command cluster\n# input-digest ", 0) == 0);
    CHECK(has_line(r.out, "# config "));
    const auto l = cli::labels(r.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == l[1]);
    CHECK(l[2] == l[3]);
    CHECK(l[0] != l[2]);
    CHECK(line_after(r.out, "# clusters ") == "2");

    const cli::Run c = cli::run("cluster --mode constrained " + dir.write("e2.txt", kTwoEdges));
    REQUIRE(c.code == 0);
    CHECK(line_after(c.out, "# clusters ") == "2");

    const cli::Run z = cli::run("cluster " + dir.write("z.txt", "3\n0 0 0\n0 0 0\n0 0 0\n"));
    CHECK(z.code == 0);
    CHECK(cli::labels(z.out) == std::vector<long>{-1, -1, -1});

    CHECK(cli::run("cluster " + dir.write("bad.txt", "3\n0 1\n")).code == 2);
    CHECK(cli::run("cluster " + dir.write("asym.txt", "2\n0 1\n0 0\n")).code == 2);
    CHECK(cli::run("cluster --symmetrize " + dir.write("asym2.txt", "2\n0 1\n0 0\n")).code == 0);
    CHECK(cli::run("cluster /nonexistent/file").code == 2);
    CHECK(cli::run("cluster").code == 2);
  }

  TEST_CASE("cdsc") {
    cli::TempDir dir;
    const std::string k3 = dir.write("k3.txt", kK3);
    const cli::Run r = cli::run("cdsc " + k3 + " --constraints 0 --alpha auto");
    REQUIRE(r.code == 0);
    CHECK(cli::labels(r.out) == std::vector<long>{0, 0, 0});
    CHECK(has_line(r.out, "# alpha "));

    const std::string grid = dir.write("grid.txt", cli::clique_grid_edges(20, 10));
    const cli::Run f = cli::run("cdsc " + grid + " --constraints 35 --fast");
    REQUIRE(f.code == 0);
    CHECK(line_after(f.out, "# support ") == "30,31,32,33,34,35,36,37,38,39");
    std::istringstream sizes(line_after(f.out, "# subgraph-sizes "));
    int s = 0, count = 0;
    while (sizes >> s) {
      CHECK(s <= 11);
      ++count;
    }
    CHECK(count > 0);

    CHECK(cli::run("cdsc " + k3 + " --constraints 7").code == 2);
    CHECK(cli::run("cdsc " + k3 + " --constraints x").code == 2);
    CHECK(cli::run("cdsc " + k3 + " --constraints 0 --alpha -1").code == 2);

    // A weakly attached query vertex is abandoned without a penalty.
    const std::string weak =
        dir.write("weak.txt", "4\n0 .1 .1 .1\n.1 0 1 1\n.1 1 0 1\n.1 1 1 0\n");
    CHECK(cli::run("cdsc " + weak + " --constraints 0 --alpha 0.01").code == 4);
    CHECK(cli::run("cdsc " + weak + " --constraints 0").code == 0);
  }

  TEST_CASE("scod") {
    cli::TempDir dir;
    const cli::Run r = cli::run("scod " + dir.write("k3.txt", kK3));
    REQUIRE(r.code == 0);
    CHECK_FALSE(has_line(r.out, "# jaccard"));
    CHECK(has_line(r.out, "# outliers "));

    std::string pts = "8 2\n";
    for (int i = 0; i < 3; ++i) pts += "0 0." + std::to_string(i) + " C0\n";
    for (int i = 0; i < 3; ++i) pts += "5 5." + std::to_string(i) + " C1\n";
    pts += "-9 9 OUT\n9 -9 OUT\n";
    const cli::Run p = cli::run("scod " + dir.write("pts.txt", pts));
    REQUIRE(p.code == 0);
    CHECK(has_line(p.out, "# jaccard "));
    CHECK(has_line(p.out, "# v-measure "));
    CHECK(has_line(p.out, "# purity "));

    CHECK(cli::run("scod --neighbor-fraction 0 " + dir.write("k.txt", kK3)).code == 2);
  }

  TEST_CASE("consensus") {
    cli::TempDir dir;
    const cli::Run same = cli::run("consensus " + dir.write("s.txt", "0 0 1 1\n0 0 1 1\n0 0 1 1\n"));
    REQUIRE(same.code == 0);
    const auto l = cli::labels(same.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == l[1]);
    CHECK(l[2] == l[3]);
    CHECK(l[0] != l[2]);

    const cli::Run three = cli::run("consensus " + dir.write("t.txt", "0 0 1\n0 1 1\n0 0 0\n"));
    REQUIRE(three.code == 0);
    const auto t = cli::labels(three.out);
    CHECK(t[0] == t[1]);
    CHECK(t[0] >= 0);

    const cli::Run one = cli::run("consensus " + dir.write("o.txt", "4 4 7 7\n"));
    CHECK(cli::labels(one.out) == cli::labels(same.out));

    CHECK(cli::run("consensus " + dir.write("r.txt", "0 0 1\n0 1\n")).code == 2);
  }

  TEST_CASE("bench") {
    const cli::Run r = cli::run("bench --suite scod-synthetic --runs 0");
    CHECK(r.code == 0);
    CHECK(has_line(r.out, "# runs 0"));
    const cli::Run s = cli::run("bench --suite fastcdsc-speed --cliques 4 --clique-size 10 --queries 4");
    REQUIRE(s.code == 0);
    CHECK(has_line(s.out, "# queries 4"));
    CHECK(cli::run("bench --suite nope").code == 2);
  }

  TEST_CASE("determinism and config precedence") {
    cli::TempDir dir;
    const std::string e = dir.write("e.txt", kTwoEdges);
    CHECK(cli::run("cluster " + e + " --seed 4").out == cli::run("cluster " + e + " --seed 4").out);
    const std::string ini = dir.write("c.ini", "[cluster]\nseed=9\nsolver=replicator\n");
    const cli::Run env = cli::run("cluster " + e, "DOMSET_CONFIG=" + ini);
    CHECK(line_after(env.out, "# config ").find("seed=9") != std::string::npos);
    CHECK(line_after(env.out, "# config ").find("solver=replicator") != std::string::npos);
    const cli::Run flag = cli::run("cluster " + e + " --seed 2", "DOMSET_CONFIG=" + ini);
    CHECK(line_after(flag.out, "# config ").find("seed=2") != std::string::npos);
    CHECK(line_after(flag.out, "# config ").find("solver=replicator") != std::string::npos);
  }
}
