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

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "photonet/channels.hpp"
#include "photonet/diagram.hpp"
#include "photonet/generators.hpp"

namespace photonet {

// ------------------------------------------------------------- experiments

/// Two single photons on a 50:50 beam splitter.
Diagram hom_diagram();
/// HOM with internal states, number-resolving readout (inflate before use).
Diagram hom_distinguishable(const InternalState& s1, const InternalState& s2);
/// HOM with PhotonLoss(p) on the first arm, reading the total photon count.
Diagram hom_lossy(double p);
/// Qubit teleportation with classically controlled corrections.
Diagram teleport_zx();
/// Dual-rail teleportation through a type-II fusion.
Diagram teleport_fusion();

/// (cos t_i, sin t_i) for t_i = i (pi/2) / (n - 1).
std::vector<std::array<double, 2>> rotated_unit_vectors(int n);

struct FusionPoint {
  double overlap = 0.0;
  double fidelity = 0.0;
  double p_succ = 0.0;
};
/// Heralded Bell-pair fidelity for s1 = (1, 0) and s2 swept over
/// rotated_unit_vectors(n).
std::vector<FusionPoint> fusion_fidelity_sweep(int n);
FusionPoint fusion_fidelity(const InternalState& s1, const InternalState& s2);

/// Create(1, 1, 1) >> ansatz(3, layers).
Diagram bose_hubbard_state(int layers = 4);
/// <psi| H (x) id |psi> for the two-site chain with (t, U, mu) = (0.1, 4, 2).
DiagramSum bose_hubbard_energy(int layers = 4);

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ExampleReport {
  std::string name;
  std::vector<Check> checks;
  /// Tabular results, empty for examples without a table.
  std::string csv;
  bool ok() const;
};

struct ExampleOptions {
  std::uint64_t seed = 7;
  /// Random restarts for the Bose-Hubbard sweep; 0 skips it.
  int restarts = 0;
};

std::vector<std::string> example_names();
/// RangeError for an unknown name.
ExampleReport run_example(const std::string& name, const ExampleOptions& opts = {});

// ----------------------------------------------------------------- bench

enum class DepthRule { constant, log, linear };

DepthRule depth_rule_from_string(const std::string& s);
std::string to_string(DepthRule r);
/// l = 2, floor(log2(7n/5)), floor(n/2 + 1); clamped to at least 1.
int depth_for(DepthRule r, int modes);
std::string depth_formula(DepthRule r);
/// floor(1.5 n).
int monomial_degree(int photons);

struct BenchCircuit {
  std::string id;
  int modes = 0;
  int photons = 0;
  DepthRule depth = DepthRule::constant;
  std::vector<int> powers;
  /// Closed diagram <psi| U^dagger M U |psi> with numeric parameters.
  Diagram diagram;
};

BenchCircuit make_bench_circuit(int modes, int photons, DepthRule depth, std::uint64_t seed);

struct BenchRecord {
  std::string circuit_id;
  int modes = 0;
  int photons = 0;
  std::string depth;
  std::string backend;
  double wall_time = 0.0;
  std::uint64_t peak_size = 0;
  /// ok, timeout, oom, ineligible or error.
  std::string status;
  double value = 0.0;
};

struct BenchLimits {
  double timeout_s = 60.0;
  /// Address-space cap per record in bytes; 0 leaves it unlimited.
  std::uint64_t mem_cap = 0;
  /// Run each record in a forked child.
  bool isolate = true;
  int jobs = 1;
};

struct BenchConfig {
  std::vector<int> modes;  // empty: modes = photons
  std::vector<int> photons;
  std::vector<DepthRule> depths;
  int seeds = 1;
  std::uint64_t base_seed = 1;
  BenchLimits limits;
  /// Directory for the serialized circuits; empty skips saving.
  std::string save_dir;
};

/// One record per backend, in (tn, permanent) order.
std::vector<BenchRecord> run_bench_circuit(const BenchCircuit& c, const BenchLimits& limits);
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

/// Header plus one line per record; wall_time is left blank when
/// `omit_timing` so that repeated runs are byte-identical.
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& recs, bool omit_timing = false);

}  // namespace photonet
