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

#include <filesystem>
#include <fstream>

#include "photonet/channels.hpp"
#include "photonet/compile_tn.hpp"
#include "photonet/errors.hpp"
#include "photonet/experiments.hpp"
#include "photonet/generators.hpp"
#include "photonet/io.hpp"
#include "photonet/vqe.hpp"

using namespace photonet;

namespace {

std::string data(const std::string& name) { return std::string(PHOTONET_TEST_DATA) + "/" + name; }

// Semantic equality at a small cap, via the doubled tensor when needed.
double semantic_diff(const Diagram& a, const Diagram& b) {
  EvalOptions o;
  o.force_doubled = !is_pure(a);
  o.dom_caps = std::vector<int>(a.dom().size(), 2);
  o.cod_caps = std::vector<int>(a.cod().size(), 3);
  return evaluate(a, o).tensor().max_abs_diff(evaluate(b, o).tensor());
}

}  // namespace

TEST_CASE("diagrams survive a JSON round trip", "[io]") {
  const std::vector<Diagram> cases = {
      hom_diagram(),
      teleport_zx(),
      teleport_fusion(),
      hom_lossy(0.8),
      Create({1, 1}, {{1.0, 0.0}, {std::sqrt(0.5), Complex(0, std::sqrt(0.5))}}) >> BS() >> NumberResolvingMeasurement(2),
      Z(1, 2, 0.25) >> X(1, 1, 0.1) * H() >> Measure(2) >> And() >> Encode(1),
      Id(qmode) * Id(qmode) >> MZI(0.1, 0.2).dagger() >> BBS(0.3) >> TBS(0.05).conjugate(),
      Create({1}) >> creation_op() >> annihilation_op() >> W(2) >> WMerge(2) >> NumOp(),
      Ket({1, 0}) >> DualRail(2) >> FusionTypeI() >> Id(bit.pow(2)) * ThresholdMeasurement(2) >> Or() * Xor(),
      Id(qubit) >> BitFlip(0.2) >> Dephasing(0.4),
      PhaseShiftDR(0.1).dagger() >> XMeasurementDR(),
      BitKet({1, 0, 1}) >> BinaryMatrix({{1, 0, 1}, {1, 1, 0}}) >> PostselectBit(0) * Not(),
      Create({2, 1}) >> NumberResolvingMeasurement(2) >> Sub() >> Mod2() >>
          ClassicalFunction(bit, bit, {2}, {{{0}, {1}}, {{1}, {0}}}),
      BitKet({1}) * Create({1}) >> BitControlledPhaseShift(0.3) >> Phase(Param::symbol("t") * 2.0 + Param(0.1)),
      Ket({0}) * Ket({1}) >> Swap(qubit, qubit) >> Z(2, 1) >> Scalar(Complex(0.5, 0.25)) * Id(qubit),
  };
  for (size_t k = 0; k < cases.size(); ++k) {
    INFO("case " << k);
    const Json j = diagram_to_json(cases[k]);
    const Diagram back = diagram_from_json(j);
    CHECK(back.dom() == cases[k].dom());
    CHECK(back.cod() == cases[k].cod());
    CHECK(diagram_to_json(back) == j);
    CHECK(diagram_from_json(Json::parse(j.dump())) == back);
    if (cases[k].free_symbols().empty()) CHECK(semantic_diff(cases[k], back) < 1e-12);
  }
}

TEST_CASE("circuit files keep symbols and meta", "[io]") {
  CircuitFile c;
  c.diagram = Create({1}) >> Phase(Param::symbol("a")) >> Select({1});
  c.symbols = {{"a", 0.25}};
  c.meta = {{"origin", "test"}};
  const auto path = std::filesystem::temp_directory_path() / "photonet_io_roundtrip.json";
  save_circuit(c, path.string());
  const CircuitFile back = load_circuit(path.string());
  CHECK(back.symbols == c.symbols);
  CHECK(back.meta == c.meta);
  CHECK(serialize_circuit(back) == serialize_circuit(c));
  CHECK(std::abs(evaluate(back.diagram.substitute(back.symbols)).scalar() - Complex(0, 1)) < 1e-14);
  std::filesystem::remove(path);
}

TEST_CASE("canonical form is a fixed point", "[io]") {
  const CircuitFile c = load_circuit(data("hom.json"));
  const Json canon = serialize_circuit(c);
  CHECK(serialize_circuit(parse_circuit(canon)) == canon);
  CHECK(canon["meta"]["title"] == "Hong-Ou-Mandel");
  const auto p = evaluate(c.diagram).prob_dist();
  CHECK(std::abs(p.at({2, 0}) - 0.5) < 1e-12);
}

TEST_CASE("parse errors name the box", "[io]") {
  try {
    load_circuit(data("unknown_box.json"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("box 1"));
  }
  try {
    load_circuit(data("reuse.json"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("box 1"));
  }
  CHECK_THROWS_AS(load_circuit(data("mistyped.json")), ParseError);
  CHECK_THROWS_AS(load_circuit(data("truncated.json")), ParseError);
  CHECK_THROWS_AS(load_circuit(data("does_not_exist.json")), ParseError);
  CHECK_THROWS_AS(parse_circuit(Json::parse(R"({"dom": [], "boxes": [{"name": "H", "wires_in": [7], "wires_out": [8]}]})")),
                  ParseError);
  CHECK_THROWS_AS(parse_circuit(Json::parse(R"({"dom": ["trit"], "boxes": []})")), ParseError);
  CHECK_THROWS_AS(
      parse_circuit(Json::parse(R"({"dom": [], "cod": ["qubit"], "boxes": [{"name": "Ket", "attrs": {"bits": [0]},
                                    "wires_in": [], "wires_out": [0]}, {"name": "H", "wires_in": [0], "wires_out": [1]}],
                                    "cod_wires": [0]})")),
      ParseError);
}

TEST_CASE("empty circuit", "[io]") {
  const CircuitFile c = load_circuit(data("empty.json"));
  CHECK(c.diagram.dom().empty());
  CHECK(c.diagram.nodes().empty());
  CHECK(evaluate(c.diagram).scalar() == Complex(1.0));
}
