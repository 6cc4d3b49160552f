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
#include "photonet/errors.hpp"
#include "photonet/generators.hpp"
#include "photonet/permanent.hpp"
#include "photonet/vqe.hpp"

using namespace photonet;

namespace {

EvalOptions on(Backend b) {
  EvalOptions o;
  o.backend = b;
  return o;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("permanent algorithms agree with the permutation sum", "[permanent]") {
  std::mt19937_64 rng(17);
  for (int n = 0; n <= 7; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto a = oracle::random_complex(n, n, rng);
      const Complex want = oracle::permanent(a);
      INFO("n = " << n);
      CHECK(rel(permanent_naive(a), want) < 1e-10);
      CHECK(rel(permanent_ryser(a), want) < 1e-10);
      CHECK(rel(permanent_glynn(a), want) < 1e-10);
      CHECK(rel(permanent(a), want) < 1e-10);
    }
  }
}

TEST_CASE("permanent special cases", "[permanent]") {
  for (int n = 1; n <= 8; ++n) {
    const auto ones = oracle::Mat::Ones(n, n);
    CHECK(std::abs(permanent_ryser(ones) - oracle::factorial(n)) < 1e-9 * oracle::factorial(n));
    CHECK(std::abs(permanent_glynn(ones) - oracle::factorial(n)) < 1e-9 * oracle::factorial(n));
    CHECK(std::abs(permanent(oracle::Mat::Identity(n, n)) - 1.0) < 1e-12);
  }
  CHECK(permanent(oracle::Mat(0, 0)) == Complex(1.0));
  CHECK_THROWS_AS(permanent(oracle::Mat::Ones(2, 3)), NotSquare);
  CHECK_THROWS_AS(permanent_ryser(oracle::Mat::Ones(3, 2)), NotSquare);
}

TEST_CASE("occupation patterns", "[permanent]") {
  const auto c = compositions(2, 3);
  REQUIRE(c.size() == 6);
  CHECK(c.front() == Occupation{2, 0, 0});
  CHECK(c.back() == Occupation{0, 0, 2});
  CHECK(composition_count(3, 4) == 20);
  CHECK(composition_count(0, 5) == 1);
  CHECK(compositions(0, 2) == std::vector<Occupation>{{0, 0}});
}

TEST_CASE("Fock amplitudes match the polynomial expansion", "[permanent]") {
  std::mt19937_64 rng(23);
  for (int m = 2; m <= 4; ++m) {
    const auto u = oracle::haar_unitary(m, rng);
    for (int n = 1; n <= 3; ++n) {
      const auto inputs = compositions(n, m);
      const auto& s = inputs[static_cast<size_t>(rng() % inputs.size())];
      const auto want = oracle::fock_output(u, s);
      for (const auto& t : compositions(n, m)) {
        auto it = want.find(t);
        const Complex w = it == want.end() ? Complex(0.0) : it->second;
        for (auto algo : {PermanentAlgo::naive, PermanentAlgo::ryser, PermanentAlgo::glynn}) {
          CHECK(std::abs(fock_amplitude(u, s, t, algo) - w) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("output distributions are normalized", "[permanent]") {
  std::mt19937_64 rng(29);
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      Interferometer intf{oracle::haar_unitary(m, rng), Occupation(static_cast<size_t>(m), 0)};
      for (int k = 0; k < n; ++k) ++intf.input[static_cast<size_t>(k % m)];
      double total = 0.0;
      for (const auto& [t, p] : prob_dist(intf)) total += p;
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
  Interferometer intf{oracle::Mat::Identity(2, 2), {1, 0}};
  CHECK_THROWS_AS(amplitude(intf, std::vector<int>{1, 1}), PhotonNumberMismatch);
}

TEST_CASE("unitary extraction", "[permanent]") {
  const Diagram d = BS() >> Phase(0.1) * Id(qmode) >> MZI(0.2, 0.4);
  oracle::Mat ph = oracle::Mat::Identity(2, 2);
  ph(0, 0) = oracle::cis_turns(0.1);
  const oracle::Mat want = oracle::mzi(0.2, 0.4) * ph * oracle::tbs(0.125);
  CHECK(oracle::max_abs(extract_unitary(d) - want) < 1e-14);
  const auto sw = extract_unitary(Swap(qmode, qmode) >> Phase(0.25) * Id(qmode));
  CHECK(std::abs(sw(0, 1) - Complex(0, 1)) < 1e-14);
  CHECK(std::abs(sw(1, 0) - 1.0) < 1e-14);
  CHECK_THROWS_AS(extract_unitary(NumOp()), BackendIneligible);
}

TEST_CASE("sparse sweep agrees with the tensor network", "[permanent]") {
  const Diagram a = annihilation_op(), ad = creation_op();
  const std::vector<Diagram> cases = {
      Create({1, 1}) >> BS(),
      Create({2, 1, 0}) >> ansatz(3, 3).substitute({{"x000", 0.1}, {"x001", 0.7}, {"x002", 0.3}, {"x003", 0.9},
                                                    {"x004", 0.2}, {"x005", 0.4}}),
      Create({1, 2}) >> NumOp() * Id(qmode) >> BS() >> Select({1, 2}),
      Create({2}) >> W(2) >> BS() >> NumberResolvingMeasurement(2),
      Create({1}) >> ad >> a >> ad,
  };
  for (size_t k = 0; k < cases.size(); ++k) {
    INFO("case " << k);
    const auto sparse = permanent_evaluate(cases[k]);
    const auto tn = evaluate(cases[k], on(Backend::tn));
    if (tn.cod().empty()) {
      CHECK(std::abs(sparse.begin()->second - tn.scalar()) < 1e-12);
      continue;
    }
    if (!tn.doubled()) {
      const Tensor amps = tn.amplitudes();
      for (const auto& [occ, z] : sparse) {
        bool inside = true;
        for (size_t i = 0; i < occ.size(); ++i) inside = inside && occ[i] < amps.shape()[i];
        if (inside) CHECK(std::abs(amps.at(occ) - z) < 1e-12);
      }
    }
    const auto pe = evaluate(cases[k], on(Backend::permanent)).prob_dist();
    for (const auto& [occ, p] : tn.prob_dist()) {
      auto it = pe.find(occ);
      CHECK(std::abs((it == pe.end() ? 0.0 : it->second) - p) < 1e-12);
    }
  }
}

TEST_CASE("permanent backend eligibility", "[permanent]") {
  CHECK_THROWS_AS(permanent_evaluate(Ket({0}) >> H()), BackendIneligible);
  CHECK_THROWS_AS(evaluate(Create({1, 1}) >> BS() >> ThresholdMeasurement(2) >> Xor(),
                           on(Backend::permanent)),
                  BackendIneligible);
  CHECK_NOTHROW(evaluate(Create({1, 1}) >> BS() >> NumberResolvingMeasurement(2), on(Backend::permanent)));
}

TEST_CASE("expectation values through permanents", "[permanent]") {
  const Bindings x{{"x000", 0.11}, {"x001", 0.52}, {"x002", 0.83}, {"x003", 0.27}};
  const Diagram prep = Create({1, 1, 0}) >> ansatz(3, 2).substitute(x);
  const DiagramSum obs(NumOp() * NumOp() * Id(qmode));
  const double got = expectation_permanent(prep, obs);
  // <n0 n1> from the output distribution.
  // Brick wall: MZI(x0, x1) on modes 0-1, then MZI(x2, x3) on modes 1-2.
  oracle::Mat l1 = oracle::Mat::Identity(3, 3), l2 = oracle::Mat::Identity(3, 3);
  l1.block(0, 0, 2, 2) = oracle::mzi(0.11, 0.52);
  l2.block(1, 1, 2, 2) = oracle::mzi(0.83, 0.27);
  const oracle::Mat u = l2 * l1;
  CHECK(oracle::max_abs(extract_unitary(ansatz(3, 2).substitute(x)) - u) < 1e-14);
  double want = 0.0;
  for (const auto& [t, amp] : oracle::fock_output(u, {1, 1, 0})) want += std::norm(amp) * t[0] * t[1];
  CHECK(std::abs(got - want) < 1e-12);
}
