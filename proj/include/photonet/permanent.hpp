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

#include <Eigen/Core>
#include <map>
#include <span>
#include <vector>

#include "photonet/diagram.hpp"

namespace photonet {

enum class PermanentAlgo { automatic, naive, ryser, glynn };

/// Matrix permanent. The 0x0 permanent is 1.
Complex permanent(const Eigen::MatrixXcd& a, PermanentAlgo algo = PermanentAlgo::automatic);
Complex permanent_naive(const Eigen::MatrixXcd& a);
Complex permanent_ryser(const Eigen::MatrixXcd& a);
Complex permanent_glynn(const Eigen::MatrixXcd& a);

using Occupation = std::vector<int>;

/// <t| U |s> on Fock space: Perm(U_{t,s}) / sqrt(prod s_i! prod t_j!), with
/// U(out, in) the single-photon matrix.
Complex fock_amplitude(const Eigen::MatrixXcd& u, std::span<const int> s, std::span<const int> t,
                       PermanentAlgo algo = PermanentAlgo::automatic);

/// All occupation patterns of `n` photons in `m` modes, lexicographically
/// descending on the first mode (n, 0, ...) first.
std::vector<Occupation> compositions(int n, int m);
/// Number of patterns, C(n + m - 1, n), saturating at SIZE_MAX.
size_t composition_count(int n, int m);

struct Interferometer {
  Eigen::MatrixXcd u;
  Occupation input;
};

/// Single-photon matrix of a diagram made of linear-optical gates on qmodes
/// (and wiring). Throws BackendIneligible naming the first other box.
Eigen::MatrixXcd extract_unitary(const Diagram& d);

/// <t|U|s> = Perm(U_{t,s}) / sqrt(s! t!); PhotonNumberMismatch when photon numbers differ.
Complex amplitude(const Interferometer& intf, std::span<const int> t, PermanentAlgo algo = PermanentAlgo::automatic);

/// |amplitude|^2 over all output patterns (TooManyOutcomes above 1e6).
std::map<Occupation, double> prob_dist(const Interferometer& intf, PermanentAlgo algo = PermanentAlgo::automatic);

/// Sparse Fock-basis state: occupation of the diagram's cod wires -> amplitude.
using SparseState = std::map<Occupation, Complex>;

/// Evaluates a closed-domain diagram of sources, linear optics, Fock-local
/// operators, effects and trailing number-resolving readouts by sweeping a
/// sparse Fock state; linear-optical blocks are applied through permanents.
/// Throws BackendIneligible for any other box.
SparseState permanent_evaluate(const Diagram& d, PermanentAlgo algo = PermanentAlgo::automatic);

/// <psi| O |psi> for psi = state_prep (closed domain) and O a sum of
/// diagrams on its codomain, all via permanent_evaluate.
double expectation_permanent(const Diagram& state_prep, const DiagramSum& observable,
                             PermanentAlgo algo = PermanentAlgo::automatic);

}  // namespace photonet
