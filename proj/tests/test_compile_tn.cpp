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

#include <cstdlib>

#include "oracles.hpp"
#include "photonet/channels.hpp"
#include "photonet/compile_tn.hpp"
#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

using namespace photonet;

namespace {

std::vector<int> boundary_dims(const Diagram& d, const WireDims& dims, bool cod) {
  std::vector<int> out;
  for (int w : cod ? d.cod_wires() : d.dom_wires()) out.push_back(dims[static_cast<size_t>(w)]);
  return out;
}

size_t label_space(const TensorNetwork& tn) {
  size_t s = 1;
  for (int d : tn.label_dims) s *= static_cast<size_t>(d);
  return s;
}

}  // namespace

TEST_CASE("light-cone dimensions", "[dims]") {
  const Diagram hom = Create({1}) * Create({1}) >> BS();
  CHECK(boundary_dims(hom, infer_dims(hom), true) == std::vector<int>{3, 3});
  const Diagram one = Create({1, 0}) >> BS() >> BS();
  CHECK(boundary_dims(one, infer_dims(one), true) == std::vector<int>{2, 2});
  // The open-input cap wins over a larger selected output; a smaller one
  // tightens a generous cap.
  const Diagram sel = Id(qmode) >> Select({3});
  CHECK(boundary_dims(sel, infer_dims(sel), false) == std::vector<int>{2});
  set_default_cap(7);
  const Diagram sel1 = Id(qmode) >> Select({1});
  CHECK(boundary_dims(sel1, infer_dims(sel1), false) == std::vector<int>{2});
  CHECK(boundary_dims(sel, infer_dims(sel), false) == std::vector<int>{4});
  set_default_cap(0);
  // Qubits and bits are two-level whatever the cap.
  const Diagram q = Id(qubit) * Id(bit);
  CHECK(boundary_dims(q, infer_dims(q), false) == std::vector<int>{2, 2});
}

TEST_CASE("photon budget bounds every wire of a component", "[dims]") {
  // Without a budget the W split would allow 2 on both branches and the
  // merge 4.
  const Diagram d = Create({2}) >> W(2) >> WMerge(2);
  const auto dims = infer_dims(d);
  for (int v : dims) CHECK(v <= 3);
  CHECK(boundary_dims(d, dims, true) == std::vector<int>{3});
}

TEST_CASE("default cap precedence", "[dims]") {
  const Diagram d = Id(qmode);
  set_default_cap(0);
  ::unsetenv("PHOTONET_CAP");
  CHECK(default_cap() == 2);
  CHECK(boundary_dims(d, infer_dims(d), false) == std::vector<int>{2});
  ::setenv("PHOTONET_CAP", "5", 1);
  CHECK(default_cap() == 5);
  CHECK(boundary_dims(d, infer_dims(d), false) == std::vector<int>{5});
  set_default_cap(3);
  CHECK(default_cap() == 3);
  set_default_cap(0);
  ::setenv("PHOTONET_CAP", "junk", 1);
  CHECK(default_cap() == 2);
  ::unsetenv("PHOTONET_CAP");
  const std::vector<int> caps{4};
  CHECK(boundary_dims(d, infer_dims(d, caps, {}), false) == std::vector<int>{4});
}

TEST_CASE("planners on random networks", "[planner]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 9;
    const TensorNetwork tn = oracle::random_network(n, rng);
    const auto g = plan_greedy(tn);
    const auto o = plan_optimal(tn);
    const auto r = plan_random_greedy(tn);
    INFO("trial " << trial << " nodes " << n);
    CHECK(o.total_cost <= g.total_cost);
    CHECK(o.total_cost <= r.total_cost);
    CHECK(r.total_cost <= g.total_cost);
    CHECK(static_cast<int>(g.steps.size()) == n - 1);
    std::uint64_t mg = 0, mo = 0;
    const Tensor tg = contract(tn, g, &mg), to = contract(tn, o, &mo);
    CHECK(mg == g.total_cost);
    CHECK(mo == o.total_cost);
    double scale = 1.0;
    for (size_t k = 0; k < tg.size(); ++k) scale = std::max(scale, std::abs(tg[k]));
    CHECK(tg.max_abs_diff(to) <= 1e-12 * scale);
    if (label_space(tn) <= (1u << 18)) CHECK(tg.max_abs_diff(oracle::brute_force(tn)) <= 1e-10 * scale);
  }
}

TEST_CASE("random greedy is deterministic for a seed", "[planner]") {
  std::mt19937_64 rng(5);
  const TensorNetwork tn = oracle::random_network(10, rng);
  const auto a = plan_random_greedy(tn, 16, 42), b = plan_random_greedy(tn, 16, 42);
  REQUIRE(a.steps.size() == b.steps.size());
  for (size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].a == b.steps[i].a);
    CHECK(a.steps[i].b == b.steps[i].b);
  }
}

TEST_CASE("exact planner refuses large networks", "[planner]") {
  std::mt19937_64 rng(1);
  const TensorNetwork tn = oracle::random_network(20, rng);
  CHECK_THROWS_AS(plan_optimal(tn), TooLarge);
  CHECK_THROWS_AS(plan_optimal(tn, 10), TooLarge);
}

TEST_CASE("compiled qubit circuit matches its matrix", "[compile]") {
  const Diagram cnot = (Z(1, 2) * Id(qubit) >> Id(qubit) * X(2, 1)) * Complex(std::sqrt(2.0));
  for (Planner p : {Planner::automatic, Planner::greedy, Planner::optimal}) {
    CompileOptions o;
    o.planner = p;
    const auto c = compile(cnot, o);
    const auto m = oracle::as_matrix(c.tensor, 4, 4);
    oracle::Mat want = oracle::Mat::Zero(4, 4);
    want(0, 0) = want(1, 1) = want(3, 2) = want(2, 3) = 1.0;
    CHECK(oracle::max_abs(m - want) < 1e-14);
    CHECK(c.dom_caps == std::vector<int>{2, 2});
    CHECK(c.madds == c.path.total_cost);
  }
}

TEST_CASE("compile reports and rejects", "[compile]") {
  const auto c = compile(Create({1, 1}) >> BS() >> Select({2, 0}));
  const Json r = plan_report(c);
  CHECK(r.contains("steps"));
  CHECK(r["nodes"].size() == c.network.nodes.size());
  CHECK(r["measured_madds"].get<std::uint64_t>() == c.madds);
  CHECK(std::abs(c.tensor[0] - Complex(0, std::sqrt(0.5))) < 1e-14);
  CHECK_THROWS_AS(compile(Phase(Param::symbol("s"))), SymbolicDiagram);
  CompileOptions bad;
  bad.cod_caps = std::vector<int>{2, 2, 2};
  CHECK_THROWS_AS(compile(Id(qmode), bad), ShapeMismatch);
}

TEST_CASE("wires running straight through", "[compile]") {
  const Diagram d = Id(qubit) * H() * Id(qubit);
  const auto c = compile(d);
  const auto m = oracle::as_matrix(c.tensor, 8, 8);
  const auto want = oracle::kron(oracle::kron(oracle::Mat::Identity(2, 2), oracle::hadamard()), oracle::Mat::Identity(2, 2));
  CHECK(oracle::max_abs(m - want) < 1e-14);
  const auto e = compile(Diagram());
  CHECK(e.tensor.size() == 1);
  CHECK(e.tensor[0] == Complex(1.0));
}
