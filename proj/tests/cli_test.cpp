// Copyright 2026 The spreadopt Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "spreadopt_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result cli(const std::string& args) {
  const auto capture = workdir() / "stdout.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && '" SPREADOPT_CLI_PATH "' " + args +
                          " > '" + capture.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

TEST_CASE("generate and eval") {
  auto r = cli("generate --family gold --degree 7 --acz-only --out gold65.txt");
  REQUIRE(r.code == 0);
  r = cli("eval --in gold65.txt --dump-correlations corr.csv");
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "m") == "65");
  CHECK(field(r.out, "acz_count") == "65");
  CHECK(std::stod(field(r.out, "sidelobe_mos")) == doctest::Approx(125.95).epsilon(1e-4));
  const auto rows = read_csv(workdir() / "corr.csv");
  CHECK(rows.front() == std::vector<std::string>{"i", "j", "k", "value"});
  CHECK(rows.size() == 1 + 127u * 65 * 66 / 2);

  CHECK(cli("generate --family weil --p 257 --out weil.txt").code == 0);
  r = cli("eval --in weil.txt");
  CHECK(field(r.out, "m") == "128");
  CHECK(cli("generate --family random --n 31 --m 4 --seed 3 --out r.txt").code == 0);
  CHECK(field(cli("eval --in r.txt").out, "n") == "31");
}

TEST_CASE("usage errors") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("eval --in missing.txt").code == 1);
  CHECK(cli("generate --family sobol --out x.txt").code == 1);
  CHECK(cli("run --n 100 --m 4 --init gold").code == 1);
  CHECK(cli("run --n 31").code == 1);
  CHECK(cli("run --n 31 --m 4 --solver simplex").code == 1);
  {
    std::ofstream bad(workdir() / "bad.txt");
    bad << "2 1\n0X\n";
  }
  const auto r = cli("eval --in bad.txt");
  CHECK(r.code == 1);
  CHECK(r.out.find("line 2 col 2") != std::string::npos);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("run writes checkpoints and is reproducible") {
  const std::string args =
      "run --n 31 --m 6 --block-size 4 --max-active-cols 2 --init random --seed 42 "
      "--max-iters 150 --checkpoint-every 40 --out ";
  auto r = cli(args + "r1");
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "feasible") == "yes");
  CHECK(cli(args + "r2").code == 0);
  CHECK(fs::exists(workdir() / "r1" / "config.json"));
  CHECK(fs::exists(workdir() / "r1" / "family_40.txt"));

  const auto a = read_csv(workdir() / "r1" / "history.csv");
  const auto b = read_csv(workdir() / "r2" / "history.csv");
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() > 2);
  CHECK(a[0][0] == "iter");
  long long last_isl = -1;
  for (std::size_t i = 1; i < a.size(); ++i) {
    // Elapsed time (column 2) is the only field allowed to differ.
    for (std::size_t c = 0; c < a[i].size(); ++c) {
      if (c != 2) CHECK(a[i][c] == b[i][c]);
    }
    if (a[i][1] == "2") {
      const long long isl = std::stoll(a[i][6]);
      if (last_isl >= 0) CHECK(isl <= last_isl);
      last_isl = isl;
    }
  }
}

TEST_CASE("config file with flag overrides") {
  {
    std::ofstream cfg(workdir() / "run.cfg");
    cfg << "n = 31\nm = 4\nblock_size = 2\nmax_iters = 20\n";
  }
  const auto r = cli("run --config run.cfg --max-iters 400 --seed 1");
  CHECK(r.code == 0);
  CHECK(std::stoll(field(r.out, "stage_two_iterations")) <= 400);
}

TEST_CASE("stage one budget exhaustion exits with 2") {
  const auto r = cli("run --n 63 --m 8 --block-size 1 --max-iters 1 --seed 3");
  CHECK(r.code == 2);
  CHECK(field(r.out, "feasible") == "no");
}

TEST_CASE("bench") {
  const auto r = cli("bench --n 31 --m 8 --block-size 8 --active-cols-list 1,4 --repeats 2");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("active_cols,mean_build_s,mean_solve_s,mean_total_s,repeats\n", 0) == 0);
  CHECK(cli("bench --active-cols-list 1,x").code == 1);
}

}  // namespace
