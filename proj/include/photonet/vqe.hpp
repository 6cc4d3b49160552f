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

#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "photonet/channels.hpp"
#include "photonet/diagram.hpp"

namespace photonet {

/// a^dagger = Create(1) (x) id >> W merge: |n> -> sqrt(n+1) |n+1>.
Diagram creation_op();
/// a = W split >> Select(1) (x) id: |n> -> sqrt(n) |n-1>.
Diagram annihilation_op();

struct LatticeGraph {
  std::vector<int> nodes;
  std::vector<std::pair<int, int>> edges;

  /// Chain 0 - 1 - ... - (n-1).
  static LatticeGraph path(int n);
  /// RangeError on self-loops, duplicate nodes or unknown endpoints.
  void validate() const;
};

struct BHParams {
  double t = 0.0;
  double U = 0.0;
  double mu = 0.0;
};

/// -t sum_edges (a_i^dagger a_j + a_j^dagger a_i) + U/2 sum_i a_i^dagger a_i^dagger a_i a_i - mu sum_i n_i,
/// on qmode^N with sites in sorted node order.
DiagramSum bose_hubbard(const LatticeGraph& g, const BHParams& p);

/// (x)_k NumOp^{p_k}.
Diagram monomial_layer(const std::vector<int>& powers);

/// Tensors every term with an identity on `extra`.
DiagramSum tensor_identity(const DiagramSum& obs, const Ty& extra);

/// state >> obs_term >> state^dagger for each term.
DiagramSum expectation(const Diagram& state, const DiagramSum& obs);

/// d expr / d sym; the zero expression (a single 0 scalar) when sym is absent.
DiagramSum grad(const DiagramSum& expr, const std::string& sym);

/// Value of a closed expression at `bindings` (real part; the imaginary
/// residue is checked against 1e-8 by the caller if wanted).
Complex evaluate_expression(const DiagramSum& expr, const Bindings& bindings, Backend backend = Backend::tn);

/// Free symbols in lexicographic order.
std::vector<std::string> sorted_symbols(const DiagramSum& expr);

struct DescentStep {
  std::vector<double> x;
  double energy = 0.0;
  std::vector<double> gradient;
};

/// Plain gradient descent over sorted_symbols(expr). Records steps + 1
/// entries: one per update plus the final point.
std::vector<DescentStep> gradient_descent(const DiagramSum& expr, std::vector<double> x0, double lr, int steps,
                                          Backend backend = Backend::tn);

/// step,energy,x0..x{m-1},grad_norm
void write_trajectory_csv(std::ostream& out, const std::vector<DescentStep>& traj);

}  // namespace photonet
