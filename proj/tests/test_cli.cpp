#include "emk/cli.hpp"

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace emk;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the emk binary; stderr goes to a temporary file.
Run emk_run(const std::string& args) {
  const std::string err_path = (std::filesystem::temp_directory_path() / "emk_cli_test_err.txt").string();
  const std::string cmd = std::string(EMK_BINARY) + " " + args + " 2>" + err_path;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

const char* kSmall = " --grid 4,1,4,1";

}  // namespace

TEST_CASE("check passes and reports the scalar curvature") {
  const Run r = emk_run(std::string("check --a 1 --b 2 --threads 2") + kSmall);
  CHECK(r.status == 0);
  CHECK(r.out.find("scalar_curvature median 24") != std::string::npos);
  CHECK(r.out.find("result PASS") != std::string::npos);
}

TEST_CASE("check exit codes") {
  const Run bad = emk_run("check --a 2 --b 1");
  CHECK(bad.status == 2);
  CHECK(bad.err.find("require 0 < a < b") != std::string::npos);

  const Run tight = emk_run(std::string("check --a 1 --b 2 --tol-jet 1e-15") + kSmall);
  CHECK(tight.status == 1);
  CHECK(tight.out.find("FAIL") != std::string::npos);

  CHECK(emk_run("check --grid 3,1,4,1").status == 2);
  CHECK(emk_run("check --grid 4,4,4").status == 2);
  CHECK(emk_run("check --tol-fd -1").status == 2);
  CHECK(emk_run("check --format xml").status == 2);
  CHECK(emk_run("check --no-such-flag").status == 2);
  CHECK(emk_run("").status == 2);
}

TEST_CASE("check CSV") {
  const Run r = emk_run(std::string("check --format csv") + kSmall);
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "equation,max_residual,mean_residual,tolerance,pass");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "true");
  }
  CHECK(rows == 12);
}

TEST_CASE("output is independent of the thread count") {
  const Run a = emk_run(std::string("check --format csv --threads 1") + kSmall);
  const Run b = emk_run(std::string("check --format csv --threads 3") + kSmall);
  CHECK(a.out == b.out);
  const Run c = emk_run("sweep --ratio-min 1.5 --ratio-max 20 --steps 6 --threads 1");
  const Run d = emk_run("sweep --ratio-min 1.5 --ratio-max 20 --steps 6 --threads 4");
  CHECK(c.out == d.out);
  CHECK(c.status == 0);
}

TEST_CASE("sweep CSV") {
  const Run r = emk_run("sweep --ratio 2");
  REQUIRE(r.status == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "ratio,d,c,area_sigma,area_1,yamabe,calabi,max_residual");
  CHECK(row.rfind("2,24", 0) == 0);
  CHECK(row.find("54.29292631450272") != std::string::npos);

  CHECK(emk_run("sweep --ratio-min 3 --ratio-max 2").status == 2);
  CHECK(emk_run("sweep --ratio-min 2 --ratio-max 2 --steps 5").status == 2);
  CHECK(emk_run("sweep --ratio-min 0.5 --ratio-max 2").status == 2);
}

TEST_CASE("identities command") {
  const Run r = emk_run("identities --samples 20");
  CHECK(r.status == 0);
  CHECK(r.out.find("leibniz") != std::string::npos);
  CHECK(r.out.find("result PASS") != std::string::npos);
  const Run f = emk_run("identities --samples 20 --flip-codifferential-sign");
  CHECK(f.status == 1);
  CHECK(f.out.find("leibniz") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
  const auto path = std::filesystem::temp_directory_path() / "emk_cli_test.cfg";
  {
    std::ofstream cfg(path);
    cfg << "a=1.5\nb=4\ngrid=\"4,1,4,1\"\ntol-jet=1e-7\n";
  }
  const Run printed = emk_run("check --config " + path.string() + " --b 5 --print-config");
  CHECK(printed.status == 0);
  CHECK(printed.out.find("a=1.5\n") != std::string::npos);
  CHECK(printed.out.find("b=5\n") != std::string::npos);
  CHECK(printed.out.find("grid=\"4,1,4,1\"") != std::string::npos);
  CHECK(printed.out.find("tol-jet=9.9999999999999995e-08") != std::string::npos);

  const Run defaults = emk_run("--print-config");
  CHECK(defaults.status == 0);
  CHECK(defaults.out.find("grid=\"32,8,32,8\"") != std::string::npos);

  // the printed configuration reads back
  const auto round_trip = std::filesystem::temp_directory_path() / "emk_cli_test_rt.cfg";
  {
    std::ofstream out(round_trip);
    out << printed.out;
  }
  const Run again = emk_run("--config " + round_trip.string() + " --print-config");
  CHECK(again.out == printed.out);
  CHECK(emk_run("check --config " + path.string()).status == 0);
}

TEST_CASE("in-process commands") {
  RunConfig c;
  c.grid = {4, 1, 4, 1};
  std::ostringstream out, err;
  CHECK(cmd_check(c, out, err) == kPass);
  c.a = 3.0;
  CHECK(cmd_check(c, out, err) == kUsageError);
  CHECK(err.str().find("require 0 < a < b") != std::string::npos);

  RunConfig s;
  s.command = "sweep";
  s.ratio_min = 1.001;
  s.ratio_max = 100.0;
  s.steps = 20;
  s.residual_grid = {4, 1, 4, 1};
  std::ostringstream csv;
  CHECK(cmd_sweep(s, csv, err) == kPass);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  double prev = 0.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 8);
    CHECK(v[5] > prev);
    CHECK(v[5] > 53.31);
    CHECK(v[5] < 61.57);
    prev = v[5];
    ++rows;
  }
  CHECK(rows == 20);
  CHECK(parse_grid("32,8,32,8") == std::array<int, 4>{32, 8, 32, 8});
  CHECK_THROWS_AS(parse_grid("32,8,x,8"), InvalidParams);
}
