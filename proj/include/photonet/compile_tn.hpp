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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "photonet/diagram.hpp"
#include "photonet/tensor.hpp"

namespace photonet {

/// Cap of open input mode wires: set_default_cap(), else $PHOTONET_CAP, else 2.
int default_cap();
/// 0 restores the environment/builtin default.
void set_default_cap(int cap);

/// Per wire id: the dimension used for that wire.
using WireDims = std::vector<int>;

/// Light-cone photon-number inference. Given caps on the boundary override
/// the inferred ones on those wires.
WireDims infer_dims(const Diagram& d, std::span<const int> dom_caps = {}, std::span<const int> cod_caps = {});

struct TNNode {
  std::string name;
  Tensor tensor;
  std::vector<int> labels;
};

struct TensorNetwork {
  std::vector<TNNode> nodes;
  std::vector<int> open;  // domain labels, then codomain labels
  std::vector<int> label_dims;
  Complex scalar{1.0};
};

/// One node per box of `d` (which must already be flat for the intended
/// granularity) plus identity nodes for wires running straight through.
TensorNetwork to_tensor_network(const Diagram& d, const WireDims& dims);

/// Merge tree in SSA form: node ids 0..n-1, merge k creates id n+k.
struct ContractionPath {
  struct Step {
    int a;
    int b;
    std::uint64_t cost;
    std::vector<int> shape;
  };
  std::vector<Step> steps;
  std::uint64_t total_cost = 0;
};

ContractionPath plan_greedy(const TensorNetwork& tn);
/// Exact DP over subsets; TooLarge when tn has more than `max_nodes` nodes.
/// Best of plan_greedy and `trials` Gumbel-perturbed greedy runs over
/// connected pairs; deterministic for a fixed seed. Greedy plans below
/// 2^22 multiply-adds are returned as they are.
ContractionPath plan_random_greedy(const TensorNetwork& tn, int trials = 64, std::uint64_t seed = 0x5eed);
ContractionPath plan_optimal(const TensorNetwork& tn, int max_nodes = 18);

/// Contracts along `path`; axes ordered as `tn.open`. Adds the measured
/// multiply-add count to `*madds` when non-null.
Tensor contract(const TensorNetwork& tn, const ContractionPath& path, std::uint64_t* madds = nullptr);

enum class Planner { automatic, greedy, optimal };

struct CompileOptions {
  std::optional<std::vector<int>> dom_caps;
  std::optional<std::vector<int>> cod_caps;
  Planner planner = Planner::automatic;
};

struct Compiled {
  Tensor tensor;  // axes [dom..., cod...]
  std::vector<int> dom_caps;
  std::vector<int> cod_caps;
  TensorNetwork network;
  ContractionPath path;
  std::uint64_t madds = 0;
};

/// Flatten, infer dimensions, build, plan (optimal up to 12 nodes under
/// Planner::automatic) and contract.
Compiled compile(const Diagram& d, const CompileOptions& opts = {});

/// Dense tensor of `d` with the given boundary caps, axes [dom..., cod...].
Tensor evaluate_dense(const Diagram& d, std::span<const int> dom_caps, std::span<const int> cod_caps);

/// Node shapes, merge tree and costs.
Json plan_report(const Compiled& c);

}  // namespace photonet
