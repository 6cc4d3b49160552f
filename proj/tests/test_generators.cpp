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

#include "oracles.hpp"
#include "photonet/channels.hpp"
#include "photonet/compile_tn.hpp"
#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

using namespace photonet;

namespace {

oracle::Mat qubit_matrix(const Diagram& d) {
  const std::vector<int> ci(d.dom().size(), 2), co(d.cod().size(), 2);
  return oracle::as_matrix(evaluate_dense(d, ci, co), 1 << ci.size(), 1 << co.size());
}

// Amplitude of a closed diagram, classical wires included.
Complex closed(const Diagram& d) { return evaluate_dense(d, {}, {})[0]; }

Complex closed_sum(const DiagramSum& s) {
  Complex z = 0.0;
  for (const auto& t : s.terms()) z += closed(t);
  return z;
}

std::map<std::vector<int>, double> dist(const Diagram& d) { return evaluate(d).prob_dist(); }

double at(const std::map<std::vector<int>, double>& p, std::vector<int> k) {
  auto it = p.find(k);
  return it == p.end() ? 0.0 : it->second;
}

}  // namespace

TEST_CASE("Z and X spiders match their matrices", "[zx]") {
  for (int n_in = 0; n_in <= 2; ++n_in) {
    for (int n_out = 0; n_out <= 2; ++n_out) {
      for (double a : {0.0, 0.25, 0.37}) {
        INFO(n_in << " -> " << n_out << " phase " << a);
        CHECK(oracle::max_abs(qubit_matrix(Z(n_in, n_out, a)) - oracle::z_spider(n_in, n_out, a)) < 1e-13);
        CHECK(oracle::max_abs(qubit_matrix(X(n_in, n_out, a)) - oracle::x_spider(n_in, n_out, a)) < 1e-13);
      }
    }
  }
  CHECK(oracle::max_abs(qubit_matrix(H()) - oracle::hadamard()) < 1e-15);
}

TEST_CASE("spider fusion and colour change", "[zx]") {
  const auto lhs = qubit_matrix(Z(1, 2, 0.1) >> Z(1, 1, 0.2) * Id(qubit));
  CHECK(oracle::max_abs(lhs - oracle::z_spider(1, 2, 0.3)) < 1e-13);
  const auto hzh = qubit_matrix(H() >> Z(1, 1, 0.3) >> H());
  CHECK(oracle::max_abs(hzh - qubit_matrix(X(1, 1, 0.3))) < 1e-13);
}

TEST_CASE("kets, bras and copies", "[zx]") {
  const auto k = qubit_matrix(Ket({1, 0}));
  CHECK(k.rows() == 4);
  CHECK(std::abs(k(2, 0) - 1.0) < 1e-15);
  CHECK(std::abs(closed(Ket({1, 0}) >> Bra({1, 0})) - 1.0) < 1e-15);
  CHECK(std::abs(closed(Ket({1}) >> Bra({0}))) < 1e-15);
  const auto c = evaluate_dense(Copy(WireType::bit, 1, 3), std::vector<int>{2}, std::vector<int>{2, 2, 2});
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 8; ++y) {
      const bool all = (x == 0 && y == 0) || (x == 1 && y == 7);
      CHECK(c[static_cast<size_t>(x * 8 + y)] == Complex(all ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("W split is binomial", "[fock]") {
  for (int n = 0; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double want = std::sqrt(oracle::factorial(n) / (oracle::factorial(k) * oracle::factorial(n - k)));
      const Complex got = closed(Create({n}) >> W(2) >> Select({k, n - k}));
      CHECK(std::abs(got - want) < 1e-12);
    }
  }
  // Three branches: multinomial.
  const Complex got = closed(Create({3}) >> W(3) >> Select({1, 1, 1}));
  CHECK(std::abs(got - std::sqrt(6.0)) < 1e-12);
}

TEST_CASE("W merge is the dagger of W split", "[fock]") {
  const std::vector<int> c1{4}, c2{4, 4};
  const Tensor split = evaluate_dense(W(2), c1, c2);
  const Tensor merge = evaluate_dense(WMerge(2), c2, c1);
  const auto ms = oracle::as_matrix(split, 4, 16), mm = oracle::as_matrix(merge, 16, 4);
  // The merge drops totals above its cap; compare on the sector it keeps.
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; a + b < 4; ++b) {
      for (int n = 0; n < 4; ++n) CHECK(std::abs(mm(n, a * 4 + b) - std::conj(ms(a * 4 + b, n))) < 1e-13);
    }
  }
}

TEST_CASE("Create, Select and NumOp", "[fock]") {
  CHECK(std::abs(closed(Create({2, 1}) >> Select({2, 1})) - 1.0) < 1e-15);
  CHECK(std::abs(closed(Create({2, 1}) >> Select({1, 2}))) < 1e-15);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(closed(Create({n}) >> NumOp() >> Select({n})) - double(n)) < 1e-14);
  CHECK_THROWS_AS(Create({-1}), RangeError);
  CHECK_THROWS_AS(Create({1}, {{1.0, 1.0}}), NormError);
  CHECK_THROWS_AS(Create({1, 1}, {{1.0}}), DimensionMismatch);
}

TEST_CASE("linear-optical gates have the documented matrices", "[lo]") {
  auto spm = [](const Diagram& d) { return *d.nodes().front().box->single_photon_matrix(); };
  CHECK(oracle::max_abs(spm(TBS(0.1)) - oracle::tbs(0.1)) < 1e-14);
  CHECK(oracle::max_abs(spm(BS()) - oracle::tbs(0.125)) < 1e-14);
  CHECK(oracle::max_abs(spm(BBS(0.2)) - oracle::tbs(1.2 / 8)) < 1e-14);
  CHECK(oracle::max_abs(spm(HadamardBS()) - oracle::hadamard()) < 1e-14);
  CHECK(oracle::max_abs(spm(MZI(0.3, 0.7)) - oracle::mzi(0.3, 0.7)) < 1e-14);
  CHECK(std::abs(spm(Phase(0.2))(0, 0) - oracle::cis_turns(0.2)) < 1e-14);
  CHECK(oracle::max_abs(spm(MZI(0.3, 0.7).dagger()) - oracle::mzi(0.3, 0.7).adjoint()) < 1e-14);
}

TEST_CASE("gates act on Fock space through permanents", "[lo]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const double psi = u(rng), phi = u(rng);
    const Diagram gate = MZI(psi, phi);
    const auto mat = oracle::mzi(psi, phi);
    for (const std::vector<int>& s : {std::vector<int>{1, 1}, {2, 1}, {0, 3}}) {
      const auto want = oracle::fock_output(mat, s);
      for (const auto& [t, amp] : want) {
        const Complex got = closed(Create(s) >> gate >> Select(t));
        CHECK(std::abs(got - amp) < 1e-12);
      }
    }
  }
}

TEST_CASE("decomposition into phases and Hadamard splitters", "[lo]") {
  const std::vector<int> caps{3, 3};
  for (const Diagram& g : {TBS(0.17), BBS(-0.3), BS(), MZI(0.21, 0.64), HadamardBS()}) {
    const auto* lo = dynamic_cast<const LOGateBox*>(g.nodes().front().box.get());
    REQUIRE(lo != nullptr);
    const Tensor a = evaluate_dense(g, caps, caps);
    const Tensor b = evaluate_dense(lo->decomposition(), caps, caps);
    // Compare inside the photon-number sectors both keep (total < 3).
    for_each_index(std::vector<int>{3, 3, 3, 3}, [&](std::span<const int> i) {
      if (i[0] + i[1] < 3) CHECK(std::abs(a.at(i) - b.at(i)) < 1e-13);
    });
  }
}

TEST_CASE("ansatz layout", "[lo]") {
  CHECK(ansatz_mzi_count(3, 4) == 4);
  CHECK(ansatz(3, 4).free_symbols().size() == 8);
  CHECK(ansatz_mzi_count(4, 2) == 3);
  CHECK_THROWS_AS(ansatz(1, 1), RangeError);
}

TEST_CASE("classical gates are their truth tables", "[classical]") {
  auto run = [](const Diagram& g, std::vector<int> in) -> std::optional<std::vector<int>> {
    return dynamic_cast<const ClassicalBox*>(g.nodes().front().box.get())->apply(in);
  };
  for (int a = 0; a < 2; ++a) {
    CHECK((*run(Not(), {a}))[0] == 1 - a);
    for (int b = 0; b < 2; ++b) {
      CHECK((*run(Xor(), {a, b}))[0] == (a ^ b));
      CHECK((*run(And(), {a, b}))[0] == (a & b));
      CHECK((*run(Or(), {a, b}))[0] == (a | b));
    }
  }
  CHECK((*run(Add(3), {1, 2, 3}))[0] == 6);
  CHECK((*run(Sub(), {5, 2}))[0] == 3);
  CHECK_FALSE(run(Sub(), {2, 5}).has_value());
  CHECK((*run(Multiply(), {3, 4}))[0] == 12);
  CHECK((*run(Divide(), {7, 2}))[0] == 3);
  CHECK((*run(Mod2(), {7}))[0] == 1);
  const auto bm = run(BinaryMatrix({{1, 1, 0}, {0, 1, 1}}), {1, 1, 1});
  CHECK(*bm == std::vector<int>{0, 0});
}

TEST_CASE("division by zero warns and has no output", "[classical]") {
  std::vector<std::string> seen;
  set_warning_handler([&](const std::string& m) { seen.push_back(m); });
  const Tensor t = evaluate_dense(Divide(), std::vector<int>{3, 3}, std::vector<int>{3});
  for (int a = 0; a < 3; ++a) {
    for (int q = 0; q < 3; ++q) CHECK(t[static_cast<size_t>((a * 3 + 0) * 3 + q)] == Complex(0.0));
  }
  CHECK(t[static_cast<size_t>((2 * 3 + 1) * 3 + 2)] == Complex(1.0));
  CHECK_FALSE(seen.empty());
  set_warning_handler(nullptr);
}

TEST_CASE("explicit classical tables must be complete", "[classical]") {
  std::map<std::vector<int>, std::vector<int>> table{{{0}, {1}}, {{1}, {0}}};
  CHECK_NOTHROW(ClassicalFunction(bit, bit, {2}, table));
  table.erase({1});
  CHECK_THROWS_AS(ClassicalFunction(bit, bit, {2}, table), TableIncomplete);
  CHECK_THROWS_AS(BinaryMatrix({{1, 2}}), RangeError);
  CHECK_THROWS_AS(PostselectBit(2), RangeError);
}

TEST_CASE("bit-controlled gates", "[control]") {
  const std::vector<int> caps{2, 2}, out{2};
  const auto t = oracle::as_matrix(evaluate_dense(CtrlX(), caps, out), 4, 2);
  // Rows: target out; columns: (control, target in).
  CHECK(oracle::max_abs(t.leftCols(2) - oracle::Mat::Identity(2, 2)) < 1e-14);
  oracle::Mat x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(oracle::max_abs(t.rightCols(2) - x) < 1e-14);
  const Complex ph = closed(BitKet({1}) * Create({2}) >> BitControlledPhaseShift(0.1) >> Select({2}));
  CHECK(std::abs(ph - oracle::cis_turns(0.2)) < 1e-13);
  CHECK(std::abs(closed(BitKet({0}) * Create({2}) >> BitControlledPhaseShift(0.1) >> Select({2})) - 1.0) < 1e-13);
  CHECK_THROWS_AS(BitControlledGate(Z(1, 2)), TypeMismatch);
}

TEST_CASE("dual-rail encoding and measurements", "[photonic]") {
  CHECK(std::abs(closed(Ket({0}) >> DualRail(1) >> Select({1, 0})) - 1.0) < 1e-15);
  CHECK(std::abs(closed(Ket({1}) >> DualRail(1) >> Select({0, 1})) - 1.0) < 1e-15);
  const auto p1 = dist(Ket({1}) >> DualRail(1) >> ZMeasurementDR());
  CHECK(std::abs(at(p1, {1}) - 1.0) < 1e-12);
  // |+> reads 0 after the Hadamard splitter.
  const auto px = dist(Ket({0}) >> H() >> DualRail(1) >> XMeasurementDR());
  CHECK(std::abs(at(px, {0}) - 1.0) < 1e-12);
  const auto pt = dist(Create({2, 0}) >> ThresholdMeasurement(2));
  CHECK(std::abs(at(pt, {1, 0}) - 1.0) < 1e-12);
  const Complex ps = closed(Ket({1}) >> DualRail(1) >> PhaseShiftDR(0.3) >> Select({0, 1}));
  CHECK(std::abs(ps - oracle::cis_turns(0.3)) < 1e-13);
}

TEST_CASE("type-II fusion projects onto Bell states", "[photonic]") {
  const Diagram bell_phi_plus = Z(0, 2) * Scalar(std::sqrt(0.5));
  const Diagram bell_psi_plus = bell_phi_plus >> Id(qubit) * X(1, 1, 0.5);
  const Diagram bell_phi_minus = Z(0, 2, 0.5) * Scalar(std::sqrt(0.5));
  const Diagram enc = DualRail(1) * DualRail(1) >> FusionTypeII();
  const auto p_phi = dist(bell_phi_plus >> enc);
  const auto p_psi = dist(bell_psi_plus >> enc);
  const auto p_minus = dist(bell_phi_minus >> enc);
  CHECK(at(p_phi, {1, 1}) < 1e-12);
  CHECK(at(p_phi, {1, 0}) > 0.1);
  CHECK(at(p_psi, {1, 0}) < 1e-12);
  CHECK(at(p_psi, {1, 1}) > 0.1);
  CHECK(at(p_minus, {1, 0}) + at(p_minus, {1, 1}) < 1e-12);
  // The classical table, pattern by pattern.
  for (const auto& [c, s, par] : std::vector<std::tuple<std::vector<int>, int, int>>{
           {{1, 1, 0, 0}, 1, 0}, {{0, 0, 1, 1}, 1, 0}, {{1, 0, 1, 0}, 1, 1}, {{0, 1, 0, 1}, 1, 1}, {{1, 0, 0, 1}, 0, 0},
           {{0, 1, 1, 0}, 0, 0}, {{2, 0, 0, 0}, 0, 0}, {{0, 0, 0, 0}, 0, 0}, {{1, 1, 1, 1}, 0, 0}}) {
    const auto o = fusion_type_ii_outcome(c);
    CHECK(o.first == s);
    if (s == 1) CHECK(o.second == par);
  }
}

TEST_CASE("type-I fusion boundary", "[photonic]") {
  const Diagram f = FusionTypeI();
  CHECK(f.dom() == qmode.pow(4));
  CHECK(f.cod() == bit.pow(2) + qmode.pow(2));
}

TEST_CASE("derivatives agree with finite differences", "[derivative]") {
  const Param a = Param::symbol("a"), b = Param::symbol("b");
  const std::vector<Diagram> cases = {
      Create({1, 1}) >> MZI(a, b) >> Select({2, 0}),
      Create({2, 1}) >> TBS(a * 2.0) >> Phase(b) * Id(qmode) >> Select({1, 2}),
      Ket({0}) >> H() >> Z(1, 1, a) >> H() >> Bra({1}),
      BitKet({1}) * Create({2}) >> BitControlledPhaseShift(a + b) >> Select({2}),
  };
  const Bindings at0{{"a", 0.31}, {"b", 0.12}};
  const double h = 1e-6;
  for (size_t k = 0; k < cases.size(); ++k) {
    for (const std::string sym : {"a", "b"}) {
      INFO("case " << k << " d/d" << sym);
      const auto d = differentiate(cases[k], sym);
      auto bp = at0, bm = at0;
      bp[sym] += h;
      bm[sym] -= h;
      const Complex fd = (closed(cases[k].substitute(bp)) - closed(cases[k].substitute(bm))) / (2 * h);
      const Complex an = d ? closed_sum(d->substitute(at0)) : Complex(0.0);
      CHECK(std::abs(an - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
  CHECK_FALSE(differentiate(Create({1}) >> Select({1}), "a").has_value());
}
