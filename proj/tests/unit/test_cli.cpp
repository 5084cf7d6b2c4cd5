// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("an_sim_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(AN_SIM_PATH) + " " + args + " >" +
                          (work_dir() / "stdout.txt").string() + " 2>" + (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string out_path(const std::string& name) { return (work_dir() / name).string(); }

int line_count(const std::string& s) {
  int n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

const std::string kSmall = "--set n=8 --set n_cp=2 --set nu=2 --set n_a=3 --trials 3";

}  // namespace

TEST_CASE("verify exits zero on a clean build") {
  CHECK(run("verify") == 0);
  const std::string out = slurp(work_dir() / "stdout.txt");
  CHECK(out.find("PASS ") != std::string::npos);
  CHECK(out.find("FAIL ") == std::string::npos);
  CHECK(out.find("all invariants hold") != std::string::npos);
}

TEST_CASE("usage errors exit 2 and help exits 0") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("sweep --trials") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("sweep --help") == 0);
}

TEST_CASE("configuration errors exit 2 with the named rule") {
  CHECK(run("bounds --set n_a=2") == 2);
  CHECK(slurp(work_dir() / "stderr.txt").find("zero dimension") != std::string::npos);
  CHECK(run("bounds --set bogus=1") == 2);
  CHECK(slurp(work_dir() / "stderr.txt").find("unknown config key 'bogus'") != std::string::npos);
  CHECK(run("bounds --set n_cp=4") == 2);
  CHECK(slurp(work_dir() / "stderr.txt").find("cp shorter than delay spread") != std::string::npos);
  CHECK(run("sweep " + kSmall + " --param theta") == 2);
  CHECK(run("sweep " + kSmall + " --param n_e --grid 1.5") == 2);
  CHECK(run("sweep " + kSmall + " --eve best") == 2);
  CHECK(run("bounds --config " + out_path("missing.cfg")) == 2);
}

TEST_CASE("numerical failures exit 3") {
  CHECK(run("sweep " + kSmall + " --set var_ab=0") == 3);
  CHECK(slurp(work_dir() / "stderr.txt").find("trial 0") != std::string::npos);
}

TEST_CASE("bounds table") {
  REQUIRE(run("bounds --out " + out_path("bounds.csv")) == 0);
  const std::string text = slurp(out_path("bounds.csv"));
  CHECK(line_count(text) == 2);
  CHECK(text.rfind("lb_avg_secrecy,", 0) == 0);
}

TEST_CASE("sweep output is deterministic and self-describing") {
  const std::string args = "sweep " + kSmall + " --param theta --grid 0.2,0.5,0.8 --out ";
  REQUIRE(run(args + out_path("a.csv") + " --seed 4") == 0);
  REQUIRE(run(args + out_path("b.csv") + " --seed 4", "AN_SIM_THREADS=3") == 0);
  const std::string a = slurp(out_path("a.csv"));
  CHECK(a == slurp(out_path("b.csv")));
  CHECK(line_count(a) == 4);
  CHECK(a.rfind("theta,", 0) == 0);
  CHECK(a.find(",n_a,") != std::string::npos);
  CHECK(a.find("\n0.5,") != std::string::npos);

  REQUIRE(run(args + out_path("c.csv") + " --seed 5") == 0);
  CHECK(slurp(out_path("c.csv")) != a);
}

TEST_CASE("standard output and file output agree") {
  const std::string args = "sweep " + kSmall + " --seed 2";
  REQUIRE(run(args + " --out " + out_path("file.csv")) == 0);
  REQUIRE(run(args) == 0);
  CHECK(slurp(work_dir() / "stdout.txt") == slurp(out_path("file.csv")));
}

TEST_CASE("overrides apply after the config file") {
  {
    std::ofstream cfg(out_path("link.cfg"));
    cfg << "# small link\nn = 8\nn_cp = 2\nnu = 2\nn_a = 3\ntheta = 0.25\n";
  }
  REQUIRE(run("sweep --trials 2 --config " + out_path("link.cfg") + " --out " + out_path("f.csv")) == 0);
  REQUIRE(run("sweep --trials 2 --config " + out_path("link.cfg") + " --set theta=0.75 --out " + out_path("g.csv")) ==
          0);
  const std::string f = slurp(out_path("f.csv"));
  const std::string g = slurp(out_path("g.csv"));
  CHECK(f.find(",0.25,") != std::string::npos);
  CHECK(g.find(",0.75,") != std::string::npos);
  CHECK(g.find(",0.25,") == std::string::npos);
}
