#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "djp/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DJP_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("djp-cli-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("cli: unknown flags exit with 2") {
  CHECK(run("--bogus").status == 2);
  CHECK(run("exact").status == 2);
}

TEST_CASE("cli: every solver's routing verifies") {
  TempDir dir;
  const std::string edp = dir.file("edp.txt"), ndp = dir.file("ndp.txt");
  REQUIRE(run("gen random --n-forest 7 --r 2 --extra 3 --k 3 --seed 5 -o " + edp).status == 0);
  REQUIRE(run("gen random --n-forest 7 --r 2 --extra 3 --k 3 --mode ndp --seed 5 -o " + ndp).status == 0);
  CHECK(djp::read_instance_file(edp).pair_count() == 3);

  const std::string exact = dir.file("exact.rt");
  REQUIRE(run("exact " + edp + " -o " + exact).status == 0);
  CHECK(run("verify " + edp + " " + exact).status == 0);

  const std::string approx = dir.file("approx.rt");
  REQUIRE(run("approx-edp " + edp + " -o " + approx).status == 0);
  CHECK(run("verify " + edp + " " + approx + " --congestion 1").status == 0);

  const std::string rounded = dir.file("round.rt");
  const Run rr = run("round " + edp + " -o " + rounded);
  CHECK((rr.status == 0 || rr.status == 1));
  CHECK(run("verify " + edp + " " + rounded).status == 0);

  const std::string fpt = dir.file("ndp.rt");
  REQUIRE(run("ndp " + ndp + " -o " + fpt).status == 0);
  CHECK(run("verify " + ndp + " " + fpt).status == 0);

  // The same routing listed twice routes every pair twice.
  const std::string twice = dir.file("twice.rt");
  {
    const std::string text = djp::read_text_file(exact);
    std::ofstream(twice) << text << text.substr(text.find("\nr ") + 1);
  }
  CHECK(run("verify " + edp + " " + twice).status == 1);
}

TEST_CASE("cli: guard and mode errors exit with 1 and 2") {
  TempDir dir;
  const std::string grid = dir.file("grid.txt");
  REQUIRE(run("gen grid --k 4 -o " + grid).status == 0);
  CHECK(run("exact " + grid).status == 1);
  CHECK(run("ndp " + grid).status == 2);
  CHECK(run("exact " + dir.file("missing.txt")).status == 1);
}

TEST_CASE("cli: bench on the gap suite") {
  const Run r = run("bench --suite gap");
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "instance,algorithm,value,lp_value,oracle_value,congestion,time_ms,seed");
  bool found = false;
  while (std::getline(lines, line)) {
    if (line.rfind("grid-k4,exact,", 0) != 0) continue;
    found = true;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    REQUIRE(cols.size() == 8);
    CHECK(cols[2] == "1");
    CHECK(std::stod(cols[3]) >= 2.0 - 1e-6);
    CHECK(cols[4] == "1");
  }
  CHECK(found);
}

TEST_CASE("cli: lp and fvs report values") {
  TempDir dir;
  const std::string grid = dir.file("grid.txt");
  REQUIRE(run("gen grid --k 2 -o " + grid).status == 0);
  const Run lp = run("lp " + grid);
  CHECK(lp.status == 0);
  CHECK(lp.out.find("lp_value") != std::string::npos);
  const Run f = run("fvs " + grid + " --exact");
  CHECK(f.status == 0);
}
