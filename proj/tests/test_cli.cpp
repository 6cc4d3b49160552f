// Copyright 2026 The Photonet Authors
//
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

#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "photonet/experiments.hpp"
#include "photonet/io.hpp"

using namespace photonet;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stderr is dropped unless `merge` is set.
Run cli(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(PHOTONET_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(PHOTONET_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("eval prints the HOM distribution", "[cli]") {
  const Run r = cli("eval " + data("hom.json") + " --view prob");
  CHECK(r.code == 0);
  CHECK(r.out == "{\"(0,2)\": 0.5, \"(1,1)\": 0.0, \"(2,0)\": 0.5}\n");
  const Run p = cli("eval " + data("hom.json") + " --view prob --backend permanent");
  CHECK(p.code == 0);
  CHECK(p.out == r.out);
}

TEST_CASE("eval of the empty diagram", "[cli]") {
  const Run r = cli("eval " + data("empty.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "scalar: 1.0\n");
}

TEST_CASE("eval views", "[cli]") {
  const Run a = cli("eval " + data("zx.json") + " --view amp");
  CHECK(a.code == 0);
  CHECK(a.out == "{\"(0)\": [0.707106781187, 0.0], \"(1)\": [0.707106781187, 0.0]}\n");
  const Run d = cli("eval " + data("zx.json") + " --view dm");
  CHECK(d.code == 0);
  CHECK(d.out == "[[[0.5, 0.0], [0.5, 0.0]],\n [[0.5, 0.0], [0.5, 0.0]]]\n");
  const Run plan = cli("eval " + data("hom.json") + " --dump-plan");
  CHECK(plan.code == 0);
  CHECK_THAT(plan.out, Catch::Matchers::ContainsSubstring("\"steps\""));
}

TEST_CASE("eval exit codes", "[cli]") {
  CHECK(cli("eval " + data("unknown_box.json")).code == 2);
  CHECK(cli("eval " + data("truncated.json")).code == 2);
  CHECK(cli("eval " + data("hom.json") + " --view nonsense").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("eval " + data("zx.json") + " --backend permanent").code == 3);
  CHECK(cli("eval " + data("symbolic.json")).code == 4);
  const Run bound = cli("eval " + data("symbolic.json") + " --bind a=0.25");
  CHECK(bound.code == 0);
  CHECK(bound.out == "scalar: 0.0 + 1.0i\n");
  const Run msg = cli("eval " + data("unknown_box.json"), true);
  CHECK_THAT(msg.out, Catch::Matchers::ContainsSubstring("box 1"));
}

TEST_CASE("canon is idempotent", "[cli]") {
  const Run a = cli("canon " + data("hom.json"));
  REQUIRE(a.code == 0);
  const auto path = std::filesystem::temp_directory_path() / "photonet_canon.json";
  std::ofstream(path) << a.out;
  const Run b = cli("canon " + path.string());
  CHECK(b.code == 0);
  CHECK(b.out == a.out);
  std::filesystem::remove(path);
}

TEST_CASE("examples report and pass", "[cli]") {
  for (const std::string name : {"hom", "hom-loss", "teleport-zx", "teleport-fusion"}) {
    const Run r = cli("example " + name);
    INFO(name << "\n" << r.out);
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::StartsWith("PASS"));
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
  CHECK(cli("example no-such-thing").code == 2);
}

TEST_CASE("bench output is deterministic", "[cli]") {
  const std::string args = "bench --photons 2,3 --depth constant,linear --seeds 2 --omit-timing";
  const Run a = cli(args), b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "circuit_id,modes,photons,depth,backend,wall_time,peak_size,status,value");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK_THAT(line, Catch::Matchers::ContainsSubstring(",ok,"));
  }
  // 2 photon counts x 2 depth rules x 2 seeds x 2 backends.
  CHECK(rows == 16);
}

TEST_CASE("bench saves circuits that reload", "[cli]") {
  const auto dir = std::filesystem::temp_directory_path() / "photonet_bench_save";
  std::filesystem::remove_all(dir);
  const Run r = cli("bench --photons 3 --depth log --save-dir " + dir.string());
  REQUIRE(r.code == 0);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    const CircuitFile c = load_circuit(e.path().string());
    CHECK(c.meta.contains("depth_formula"));
    CHECK(c.diagram.dom().empty());
    CHECK(c.diagram.cod().empty());
  }
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("depth rules", "[bench]") {
  CHECK(depth_for(DepthRule::constant, 6) == 2);
  CHECK(depth_for(DepthRule::linear, 6) == 4);
  CHECK(depth_for(DepthRule::log, 6) == 3);
  CHECK(depth_for(DepthRule::log, 2) == 1);
  CHECK(depth_for(DepthRule::linear, 2) == 2);
  CHECK(monomial_degree(6) == 9);
  CHECK(monomial_degree(3) == 4);
  CHECK(depth_rule_from_string("log") == DepthRule::log);
  CHECK_THROWS(depth_rule_from_string("cubic"));
  const BenchCircuit c = make_bench_circuit(4, 4, DepthRule::constant, 3);
  int total = 0;
  for (int p : c.powers) total += p;
  CHECK(total == 6);
  CHECK(c.diagram.free_symbols().empty());
}

TEST_CASE("bench records report timeouts", "[bench]") {
  BenchLimits lim;
  lim.timeout_s = 1e-3;
  const auto recs = run_bench_circuit(make_bench_circuit(6, 6, DepthRule::linear, 1), lim);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) CHECK((r.status == "timeout" || r.status == "ok"));
  CHECK(recs[0].backend == "tn");
  CHECK(recs[1].backend == "permanent");
}
