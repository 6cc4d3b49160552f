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
#include "photonet/streams.hpp"

using namespace photonet;

namespace {

Tensor dense(const Diagram& d, int cap) {
  const std::vector<int> ci(d.dom().size(), cap), co(d.cod().size(), cap);
  return evaluate_dense(d, ci, co);
}

Diagram cnot() { return (Z(1, 2) * Id(qubit) >> Id(qubit) * X(2, 1)) * Complex(std::sqrt(2.0)); }

// (m, x) -> (m xor x, m): the target becomes the next memory.
Diagram ladder_step() { return cnot() >> Swap(qubit, qubit); }

Complex amp(const Diagram& d, const std::vector<int>& in, const std::vector<int>& out) {
  return evaluate(Ket(in) >> d >> Bra(out)).scalar();
}

}  // namespace

TEST_CASE("delay is the feedback of a swap", "[streams]") {
  for (const Diagram& seed : {Create({0}), Create({1})}) {
    for (int n = 1; n <= 4; ++n) {
      const Diagram a = unroll(delay(qmode, seed), n);
      const Diagram b = delay_unrolled(qmode, seed, n);
      CHECK(a.dom() == b.dom());
      CHECK(a.cod() == b.cod());
      CHECK(dense(a, 2).max_abs_diff(dense(b, 2)) < 1e-12);
    }
  }
}

TEST_CASE("delay shifts by one step", "[streams]") {
  const Diagram d = unroll(delay(qubit, Ket({0})), 3);
  // Outputs: seed, x0, x1, then x2 left in memory.
  for (int x = 0; x < 8; ++x) {
    const std::vector<int> in{x >> 2 & 1, x >> 1 & 1, x & 1};
    CHECK(std::abs(amp(d, in, {0, in[0], in[1], in[2]}) - 1.0) < 1e-12);
  }
}

TEST_CASE("two delays shift by two", "[streams]") {
  const Stream s = then(delay(qubit, Ket({0})), delay(qubit, Ket({1})));
  CHECK(s.mem == qubit.pow(2));
  const Diagram d = unroll(s, 3);
  CHECK(d.cod() == qubit.pow(5));
  for (int x = 0; x < 8; ++x) {
    const std::vector<int> in{x >> 2 & 1, x >> 1 & 1, x & 1};
    // Second seed, first seed, x0; memories hold x2 (first) and x1 (second).
    CHECK(std::abs(amp(d, in, {1, 0, in[0], in[2], in[1]}) - 1.0) < 1e-12);
  }
  const Diagram e = unroll(delay_by(qubit, Ket({0}), 2), 3);
  for (int x = 0; x < 8; ++x) {
    const std::vector<int> in{x >> 2 & 1, x >> 1 & 1, x & 1};
    CHECK(std::abs(amp(e, in, {0, 0, in[0], in[2], in[1]}) - 1.0) < 1e-12);
  }
}

TEST_CASE("CNOT ladder unrolls to the hand-composed circuit", "[streams]") {
  const Stream s = feedback(ladder_step(), qubit, qubit, qubit, Ket({0}));
  const Diagram u = unroll(s, 3);
  CHECK_NOTHROW(u.check());
  CHECK(u.dom() == qubit.pow(3));
  CHECK(u.cod() == qubit.pow(4));
  const Diagram q = Id(qubit), sw = Swap(qubit, qubit), b = ladder_step();
  const Diagram hand = Ket({0}) * Id(qubit.pow(3)) >> b * q * q >> sw * q * q >> q * b * q >> q * sw * q >> q * q * b >>
                       q * q * sw;
  CHECK(dense(u, 2).max_abs_diff(dense(hand, 2)) < 1e-12);
  // Outputs are the running parities.
  for (int x = 0; x < 8; ++x) {
    const std::vector<int> in{x >> 2 & 1, x >> 1 & 1, x & 1};
    const int m1 = in[0], m2 = m1 ^ in[1], m3 = m2 ^ in[2];
    CHECK(std::abs(amp(u, in, {0, m1, m2, m3}) - 1.0) < 1e-12);
  }
}

TEST_CASE("streams are time invariant", "[streams]") {
  // Step n + 1 is step n followed by one more application of the body.
  const Stream s = feedback(ladder_step(), qubit, qubit, qubit, Ket({1}));
  for (int n = 1; n <= 7; ++n) {
    const Diagram next = unroll(s, n + 1);
    const Diagram extended =
        build_named(qubit.pow(n + 1), [&](Builder& bl, const std::vector<Wire>& in) {
          std::vector<Wire> head(in.begin(), in.end() - 1);
          auto r = bl.apply(unroll(s, n), head);
          auto step = bl.apply(s.body, {r.back(), in.back()});
          std::vector<Wire> out(r.begin(), r.end() - 1);
          out.push_back(step[1]);
          out.push_back(step[0]);
          return out;
        });
    CHECK(dense(next, 2).max_abs_diff(dense(extended, 2)) < 1e-12);
  }
  CHECK(unroll(s, 8).dom() == qubit.pow(8));
}

TEST_CASE("stream typing errors", "[streams]") {
  CHECK_THROWS_AS(feedback(cnot(), qubit, qubit, qmode, Create({0})), TypeMismatch);
  CHECK_THROWS_AS(feedback(cnot(), qubit, qubit, qubit, Create({0})), TypeMismatch);
  CHECK_THROWS_AS(unroll(delay(qubit, Ket({0})), 0), RangeError);
  CHECK_THROWS_AS(then(delay(qubit, Ket({0})), delay(qmode, Create({0}))), TypeMismatch);
  CHECK_THROWS_AS(delay_by(qubit, Ket({0}), 0), RangeError);
  CHECK_THROWS_AS(delay_unrolled(qubit, Create({0}), 2), TypeMismatch);
}
