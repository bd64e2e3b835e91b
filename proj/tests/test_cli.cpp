#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "scatsyn/io.hpp"

using namespace scatsyn;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("scatsyn_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

const char* small_cfg = "radial_count=6\nangular_order=6\nsphere_order=8\n";

}  // namespace

TEST_CASE("synthesize: zero pattern gives a zero potential") {
  Workspace ws;
  const auto pat = ws.write("zero.txt", "L=2 convention=orthonormal-cs\n");
  const auto cfg = ws.write("run.cfg", small_cfg);
  const auto r = run({"synthesize", pat, "--config", cfg, "--out", ws.path("q.txt")});
  CHECK(r.code == 0);
  std::ifstream in(ws.path("q.txt"));
  const auto q = io::read_field(in);
  for (const cplx& v : q.values) CHECK(v == 0.0);
  CHECK(value_of(r.out, "config.radial_count") == "6");
}

TEST_CASE("synthesize: small pattern passes with a wide margin") {
  Workspace ws;
  const auto pat = ws.write("y10.txt", "L=1 convention=orthonormal-cs\n1,0,0.05,0\n");
  const auto r = run({"synthesize", pat, "--out", ws.path("q.txt")});
  CHECK(r.code == 0);
  CHECK(io::parse_double(value_of(r.out, "denom_min_modulus")) > 0.9);
  CHECK(value_of(r.out, "condition") == "pass");
}

TEST_CASE("synthesize: oversized pattern fails unless autoscaled") {
  Workspace ws;
  // ||f|| = 10 on the default grids
  const auto pat = ws.write("big.txt", "L=1 convention=orthonormal-cs\n1,0,0,10\n");
  const auto cfg = ws.write("run.cfg", "");
  const auto fail = run({"synthesize", pat, "--config", cfg, "--out", ws.path("q.txt")});
  CHECK(fail.code == cli::condition_failure);
  CHECK_FALSE(fs::exists(ws.path("q.txt")));
  CHECK(fail.err.find("--autoscale") != std::string::npos);

  const auto ok = run({"synthesize", pat, "--config", cfg, "--out", ws.path("q.txt"), "--autoscale"});
  CHECK(ok.code == 0);
  const double scale = io::parse_double(value_of(ok.out, "scale"));
  CHECK(scale > 0.0);
  CHECK(scale < 1.0);
  CHECK(io::parse_double(value_of(ok.out, "denom_min_modulus")) > 0.1);
}

TEST_CASE("forward: zero potential, synthesized potential, grid mismatch") {
  Workspace ws;
  const auto cfg = ws.write("run.cfg", small_cfg);
  const auto zero = ws.write("zero.txt", "L=0 convention=orthonormal-cs\n");
  REQUIRE(run({"synthesize", zero, "--config", cfg, "--out", ws.path("q0.txt")}).code == 0);
  REQUIRE(run({"forward", ws.path("q0.txt"), "--config", cfg, "--out", ws.path("a0.txt")}).code == 0);
  std::ifstream a0(ws.path("a0.txt"));
  for (const cplx& v : io::read_pattern(a0).values) CHECK(v == 0.0);

  const auto pat = ws.write("y10.txt", "L=1 convention=orthonormal-cs\n1,0,0.05,0\n");
  REQUIRE(run({"synthesize", pat, "--config", cfg, "--out", ws.path("q.txt")}).code == 0);
  REQUIRE(run({"forward", ws.path("q.txt"), "--config", cfg, "--out", ws.path("a.txt")}).code == 0);
  std::ifstream qa(ws.path("q.txt")), aa(ws.path("a.txt"));
  const auto q = io::read_field(qa);
  const auto a = io::read_pattern(aa);
  const auto h = synthesize_h(io::load_pattern_input(pat, 8).coeffs, 1.0, 1, q.grid).field;
  const auto ah = far_field_of_density(h, 1.0, a.grid);
  CHECK(l2_norm_sphere(a - ah) <= 1e-9);

  const auto other = ws.write("other.cfg", "radial_count=7\nangular_order=6\n");
  const auto mismatch = run({"forward", ws.path("q.txt"), "--config", other, "--out", ws.path("b.txt")});
  CHECK(mismatch.code == cli::parse_error);
}

TEST_CASE("verify: pass, report keys, determinism") {
  Workspace ws;
  const auto cfg = ws.write("run.cfg", small_cfg);
  const auto pat = ws.write("y10.txt", "L=1 convention=orthonormal-cs\n1,0,0.05,0\n");
  const auto a = run({"verify", pat, "--config", cfg});
  const auto b = run({"verify", pat, "--config", cfg});
  CHECK(a.code == 0);
  CHECK(value_of(a.out, "result") == "pass");
  CHECK(value_of(a.out, "config.epsilon") == "0.0025");
  CHECK(a.out == b.out);
}

TEST_CASE("study lemma1 and smallness") {
  Workspace ws;
  const auto cfg = ws.write("run.cfg", small_cfg);
  const auto pat = ws.write("bl.txt",
                            "L=2 convention=orthonormal-cs\n0,0,0.01,0\n1,-1,0.02,0.01\n2,1,0,-0.03\n");
  const auto l = run({"study", "lemma1", "--pattern", pat, "--config", cfg, "--L", "0,1,2,3"});
  REQUIRE(l.code == 0);
  std::istringstream csv(l.out);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "L,residual,h_norm,reachable");
  double prev = 1e300;
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
    const double r = io::parse_double(line.substr(c1 + 1, c2 - c1 - 1));
    CHECK(r <= prev + 1e-15);
    prev = r;
    ++rows;
  }
  CHECK(rows == 4);

  const auto s = run({"study", "smallness", "--config", cfg, "--c", "1e-2,1e-3,1e-4", "--out", ws.path("s.csv")});
  REQUIRE(s.code == 0);
  const double slope = io::parse_double(value_of(s.err, "slope"));
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fs::exists(ws.path("s.csv")));
}

TEST_CASE("usage and parse errors map to exit code 2") {
  Workspace ws;
  CHECK(run({}).code == cli::parse_error);
  CHECK(run({"frobnicate"}).code == cli::parse_error);
  CHECK(run({"verify"}).code == cli::parse_error);
  CHECK(run({"--help"}).code == 0);
  const auto bad = ws.write("bad.txt", "L=1 convention=orthonormal-cs\n1,0,zz,0\n");
  const auto r = run({"verify", bad});
  CHECK(r.code == cli::parse_error);
  CHECK(r.err.find("line 2") != std::string::npos);
  const auto cfg = ws.write("bad.cfg", "k=1\nwhat=3\n");
  const auto pat = ws.write("y.txt", "L=0 convention=orthonormal-cs\n");
  const auto rc = run({"verify", pat, "--config", cfg});
  CHECK(rc.code == cli::parse_error);
  CHECK(rc.err.find("line 2") != std::string::npos);
  CHECK(run({"verify", ws.path("missing.txt")}).code == cli::parse_error);
}
