#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "liesym/catalog.hpp"
#include "liesym/cli.hpp"
#include "liesym/io.hpp"

using namespace liesym;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "liesym");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("liesym_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string data_dir = LIESYM_TEST_DATA;

}  // namespace

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(Error(ErrorKind::ParseError, "")) == kExitParse);
  CHECK(exit_code_for(Error(ErrorKind::PoleEncountered, "")) == kExitPole);
  CHECK(exit_code_for(Error(ErrorKind::TransportLeftDomain, "")) == kExitPole);
  CHECK(exit_code_for(Error(ErrorKind::StepNotPositive, "")) == kExitUsage);
  CHECK(exit_code_for(Error(ErrorKind::BadParams, "")) == kExitUsage);
  CHECK(exit_code_for(Error(ErrorKind::UnknownName, "")) == kExitUsage);
  CHECK(exit_code_for(Error(ErrorKind::NotClosed, "")) == kExitFailed);
}

TEST_CASE("list and show") {
  Run r = run({"list"});
  CHECK(r.rc == 0);
  for (const auto& n : catalog_names()) CHECK(r.out.find(n) != std::string::npos);
  Run s = run({"show", "dbh"});
  CHECK(s.rc == 0);
  CHECK(s.out.find("b0_linear") != std::string::npos);
  CHECK(run({"show", "nope"}).rc == kExitUsage);
}

TEST_CASE("check-algebra") {
  Run r = run({"check-algebra", "--catalog", "riccati"});
  CHECK(r.rc == 0);
  CHECK(r.out.find("closed, r=3, jacobi=0, center=0") != std::string::npos);
  CHECK(run({"check-algebra", "--input", data_dir + "/not_closed.json"}).rc == kExitFailed);
  CHECK(run({"check-algebra", "--input", data_dir + "/malformed.json"}).rc == kExitParse);
  CHECK(run({"check-algebra", "--input", data_dir + "/riccati_eta_t.json"}).rc == 0);
  CHECK(run({"check-algebra", "--catalog", "riccati", "--input", data_dir + "/riccati_eta_t.json"}).rc ==
        kExitUsage);
}

TEST_CASE("every catalog entry closes through the CLI", "[property]") {
  for (const auto& n : catalog_names()) {
    Run r = run({"check-algebra", "--catalog", n});
    INFO(n << "\n" << r.err);
    CHECK(r.rc == 0);
    CHECK(r.out.find("jacobi=0") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({"bogus"}).rc == kExitUsage);
  CHECK(run({"list", "--bogus"}).rc == kExitUsage);
  CHECK(run({"symmetrize", "--catalog", "riccati", "--step", "0"}).rc == kExitUsage);
  CHECK(run({"symmetrize", "--catalog", "riccati", "--param", "nokey"}).rc == kExitUsage);
  CHECK(run({"symmetrize", "--catalog", "dbh", "--f-init", "0,1,0,0,0"}).rc == kExitUsage);
  CHECK(run({"pde", "--input", data_dir + "/single_time.json"}).rc == kExitUsage);
  CHECK(run({"integrate", "--catalog", "partial_riccati", "--x0", "0"}).rc == kExitUsage);
}

TEST_CASE("integrate hits the Riccati pole") {
  Run r = run({"integrate", "--catalog", "riccati", "--param", "eta=0", "--x0", "1", "--t1", "2"});
  CHECK(r.rc == kExitPole);
  CHECK(r.err.find("PoleEncountered") != std::string::npos);
  CHECK(run({"integrate", "--catalog", "riccati", "--param", "eta=1", "--x0", "0", "--t1", "1"}).rc == 0);
}

TEST_CASE("symmetrize writes CSV, report and gnuplot files") {
  fs::path d = scratch_dir("symmetrize");
  Run r = run({"symmetrize", "--catalog", "riccati", "--param", "eta=t", "--t1", "0.5", "--step", "0.01", "--csv",
               (d / "f.csv").string(), "--report", (d / "r.json").string(), "--gnuplot", (d / "f.gp").string()});
  CHECK(r.rc == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  std::string csv = slurp(d / "f.csv");
  CHECK(csv.rfind("# liesym-csv v1\nt,f0,f1,f2,f3,err_est\n", 0) == 0);
  json rep = parse_json_text(slurp(d / "r.json"));
  CHECK(rep["command"] == "symmetrize");
  CHECK(rep["seed"] == 42);
  CHECK(slurp(d / "f.gp").find("f.csv") != std::string::npos);
}

TEST_CASE("verify the DBH families") {
  Run r = run({"verify", "--catalog", "dbh", "--x0", "1.2,1.5,1.8"});
  CHECK(r.rc == 0);
  CHECK(r.out.find("b0_const") != std::string::npos);
  // a non-symmetry fails
  Run bad = run({"verify", "--catalog", "riccati", "--param", "eta=t", "--candidate", "1;0;0;0"});
  CHECK(bad.rc == kExitFailed);
}

TEST_CASE("pde command") {
  Run ok = run({"pde", "--catalog", "partial_riccati"});
  INFO(ok.out << ok.err);
  CHECK(ok.rc == 0);
  CHECK(ok.out.find("agree") != std::string::npos);
  Run bad = run({"pde", "--catalog", "partial_riccati", "--param", "perturb=1/2"});
  CHECK(bad.rc == kExitFailed);
  CHECK(bad.out.find("DISAGREE") != std::string::npos);
  CHECK(run({"pde", "--catalog", "partial_riccati", "--path", data_dir + "/l_path.json"}).rc == 0);
}

TEST_CASE("seed precedence: flag over environment over default") {
  fs::path d = scratch_dir("seed");
  auto seed_of = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"symmetrize", "--catalog", "dbh", "--t1", "0.1", "--report", (d / "r.json").string()};
    args.insert(args.begin(), extra.begin(), extra.end());
    REQUIRE(run(args).rc == 0);
    return parse_json_text(slurp(d / "r.json"))["seed"].get<std::uint64_t>();
  };
  ::unsetenv("LIESYM_SEED");
  CHECK(seed_of({}) == 42);
  ::setenv("LIESYM_SEED", "7", 1);
  CHECK(seed_of({}) == 7);
  CHECK(seed_of({"--seed", "9"}) == 9);
  ::setenv("LIESYM_SEED", "x", 1);
  CHECK(run({"list"}).rc == kExitUsage);
  ::unsetenv("LIESYM_SEED");
}

TEST_CASE("runs are deterministic", "[property]") {
  std::vector<std::vector<std::string>> suite{
      {"symmetrize", "--catalog", "kummer_schwarz", "--param", "eta=t", "--t1", "0.3"},
      {"verify", "--catalog", "dbh"},
      {"pde", "--catalog", "partial_riccati", "--steps", "50"},
  };
  for (const auto& args : suite) {
    Run a = run(args), b = run(args);
    CHECK(a.rc == b.rc);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("installed binary matches the in-process entry point") {
  std::string cmd = std::string("\"") + LIESYM_CLI_PATH + "\" list";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = ::pclose(p);
  CHECK(status == 0);
  CHECK(out == run({"list"}).out);
}
