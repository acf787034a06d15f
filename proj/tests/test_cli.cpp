// CLI integration: spawns the built binary (path from CRPOINT_BIN) and checks
// the exit-code contract and report shapes end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin() {
  const char* b = std::getenv("CRPOINT_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::string tmp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir ? dir : "/tmp") + "/" + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

const char* kEli2 = R"({"A":[[[0,0],[0,0]],[[0,0],[0,0]]],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]})";
const char* kHyp1 = R"({"A":[[[1,0],[0,0]],[[0,0],[0,0]]],"B":[[[0,0],[0,0]],[[0,0],[1,0]]]})";
const char* kTypeI =
    R"({"A":[[[1,0],[0,0]],[[0,0],[0,1]]],"B":[[[0.5,0],[0,0]],[[0,0],[2,0]]]})";
const char* kTypeII =
    R"({"A":[[[0,0],[1,0]],[[1,0],[0,1]]],"B":[[[1,0],[0,0]],[[0,0],[1,0]]]})";
const char* kNonSym =
    R"({"A":[[[1,0],[0,0]],[[0,0],[1,0]]],"B":[[[0,0],[1,0]],[[2,0],[0,0]]]})";
const char* kDegenerate = R"({"A":[[[0,0],[0,0]],[[0,0],[0,0]]],"B":[[[0,0],[0,0]],[[0,0],[0,0]]]})";

} // namespace

TEST_CASE("exit-code contract") {
  std::string eli = tmp_path("cli_eli2.json");
  std::string hyp = tmp_path("cli_hyp1.json");
  std::string t1 = tmp_path("cli_t1.json");
  std::string t2 = tmp_path("cli_t2.json");
  std::string ns = tmp_path("cli_nonsym.json");
  std::string dg = tmp_path("cli_degen.json");
  write_file(eli, kEli2);
  write_file(hyp, kHyp1);
  write_file(t1, kTypeI);
  write_file(t2, kTypeII);
  write_file(ns, kNonSym);
  write_file(dg, kDegenerate);

  CHECK(run("classify " + eli) == 0);
  CHECK(run("classify " + hyp) == 0);
  CHECK(run("classify " + ns) == 2);          // malformed input
  CHECK(run("classify missing.json") == 2);   // unreadable input
  CHECK(run("classify " + dg) == 0);          // degenerate is a value
  CHECK(run("classify " + dg + " --strict") == 3);

  CHECK(run("normal-form " + t1) == 0);
  CHECK(run("normal-form " + t2) == 3);       // non_generic:type_ii
  CHECK(run("normal-form " + eli) == 3);      // degenerate_A

  CHECK(run("homotopy " + dg) == 3);          // degenerate pair has no model
  CHECK(run("surface-check " + eli) == 2);    // a pair file is not a path file
  CHECK(run("levi-scan --model elliptic --radius 0.05 --grid 2000") == 0);
  CHECK(run("levi-scan --model nosuch") == 2);
  CHECK(run("growth-bounds --model hyperbolic --grid 400") == 0);
  CHECK(run("selftest --cases 2 --reduction 10") == 0);
}

TEST_CASE("classify report content and determinism") {
  std::string eli = tmp_path("cli_eli2b.json");
  write_file(eli, kEli2);
  std::string out1 = tmp_path("cli_rep1.json");
  std::string out2 = tmp_path("cli_rep2.json");
  CHECK(run("classify " + eli + " --out " + out1) == 0);
  CHECK(run("classify " + eli + " --out " + out2) == 0);
  std::string r1 = read_file(out1);
  CHECK(r1 == read_file(out2)); // byte-identical across runs
  CHECK(r1.find("\"sign\":\"elliptic\"") != std::string::npos);
  CHECK(r1.find("\"det4\":1,") != std::string::npos);
}

TEST_CASE("homotopy then surface-check pipeline") {
  std::string t1 = tmp_path("cli_t1b.json");
  write_file(t1, kTypeI);
  std::string path = tmp_path("cli_path.json");
  CHECK(run("homotopy " + t1 + " --samples 257 --out " + path) == 0);
  std::string path_again = tmp_path("cli_path2.json");
  CHECK(run("homotopy " + t1 + " --samples 257 --out " + path_again) == 0);
  std::string pj = read_file(path);
  CHECK(pj == read_file(path_again)); // byte-identical for fixed flags and seed
  CHECK(pj.find("\"segments\"") != std::string::npos);
  CHECK(pj.find("\"pass\":true") != std::string::npos);

  std::string rep = tmp_path("cli_surf.json");
  CHECK(run("surface-check " + path +
            " --grid-s 16 --grid-u 9 --grid-t1 8 --grid-t2 8 --out " + rep) == 0);
  std::string rj = read_file(rep);
  CHECK(rj.find("\"pass\":true") != std::string::npos);
  CHECK(rj.find("\"n_required\":") != std::string::npos);

  // model pair: single constant segment
  std::string hyp = tmp_path("cli_hyp1b.json");
  write_file(hyp, kHyp1);
  std::string mpath = tmp_path("cli_mpath.json");
  CHECK(run("homotopy " + hyp + " --out " + mpath) == 0);
  std::string mj = read_file(mpath);
  CHECK(mj.find("\"kind\":\"constant\"") != std::string::npos);
}

TEST_CASE("selftest JSON is byte-identical across runs") {
  std::string o1 = tmp_path("cli_st1.json");
  std::string o2 = tmp_path("cli_st2.json");
  CHECK(run("selftest --cases 2 --reduction 10 --out " + o1) == 0);
  CHECK(run("selftest --cases 2 --reduction 10 --out " + o2) == 0);
  std::string r1 = read_file(o1);
  CHECK(r1 == read_file(o2));
  CHECK(r1.find("\"all_pass\":true") != std::string::npos);
}

TEST_CASE("levi-scan CSV export") {
  std::string csv = tmp_path("cli_spectra.csv");
  CHECK(run("levi-scan --model elliptic --radius 0.05 --grid 100 --spectra-csv --out " +
            csv) == 0);
  std::string text = read_file(csv);
  CHECK(text.rfind("lambda1,lambda2,lambda3", 0) == 0);
}
