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
#include <optional>

#include "photonet/compile_tn.hpp"
#include "photonet/diagram.hpp"
#include "photonet/permanent.hpp"

namespace photonet {

/// A channel given by one Kraus diagram X -> Y (x) E whose trailing `n_env`
/// wires E are an environment traced out after doubling. With n_env == 0 it
/// is just its Kraus diagram.
class ChannelBox final : public BoxImpl {
 public:
  ChannelBox(std::string name, Diagram kraus, int n_env, std::vector<Param> params = {}, Json attrs = Json::object());
  const Diagram& kraus() const { return kraus_; }
  int n_env() const { return n_env_; }

  std::vector<Param> params() const override { return params_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override;
  Box substitute(const Bindings& b) const override;
  std::set<std::string> free_symbols() const override;
  std::optional<Diagram> expand() const override;
  std::optional<DiagramSum> derivative(const std::string& sym) const override;

 private:
  Diagram kraus_;
  int n_env_;
  std::vector<Param> params_;
  Json attrs_;
};

Diagram Channel(std::string name, const Diagram& kraus, int n_env = 0);
Diagram Discard(const Ty& ty);
/// Discard of n qubits.
Diagram Discard(int n);
/// Each photon independently survives with probability p.
Diagram PhotonLoss(double p);
/// (1-p) rho + p X rho X.
Diagram BitFlip(double p);
/// (1-p) rho + p Z rho Z.
Diagram Dephasing(double p);

/// True when a diagram has no classical wire and no environment channel.
bool is_pure(const Diagram& d);

/// The doubled (ket (x) bra) diagram. Quantum wires become adjacent
/// (ket, bra) pairs, classical wires stay single and carry the diagonal.
Diagram double_diagram(const Diagram& d);
/// Doubled boundary types.
Ty doubled_type(const Ty& ty);

/// Replaces every qmode by `dim` qmodes, one per internal basis state.
Diagram inflate(const Diagram& d, int dim);

enum class Backend { automatic, tn, permanent };

struct EvalOptions {
  Backend backend = Backend::automatic;
  PermanentAlgo algo = PermanentAlgo::automatic;
  Planner planner = Planner::automatic;
  /// Force the doubled (mixed) evaluation even for pure diagrams.
  bool force_doubled = false;
  std::optional<std::vector<int>> dom_caps;
  std::optional<std::vector<int>> cod_caps;
};

class EvalResult {
 public:
  EvalResult(Tensor tensor, bool doubled, Ty dom, Ty cod, std::vector<int> dom_caps, std::vector<int> cod_caps);

  /// Raw tensor: axes [dom..., cod...], doubled axes when doubled().
  const Tensor& tensor() const { return tensor_; }
  bool doubled() const { return doubled_; }
  const Ty& dom() const { return dom_; }
  const Ty& cod() const { return cod_; }
  /// One cap per cod factor.
  const std::vector<int>& cod_caps() const { return cod_caps_; }
  std::uint64_t madds = 0;

  /// Unnormalized outcome weights over cod values (quantum wires read on
  /// their diagonal). Requires an empty domain.
  std::map<std::vector<int>, double> weights() const;
  /// weights() normalized to total 1.
  std::map<std::vector<int>, double> prob_dist() const;
  /// Pure results only: cod-indexed amplitudes.
  Tensor amplitudes() const;
  /// Density matrix of the quantum cod factors, classical outputs summed
  /// out. Row/column index is row-major over the quantum factors.
  Eigen::MatrixXcd density_matrix() const;
  /// Value of a closed diagram (both boundaries empty).
  Complex scalar() const;

 private:
  Tensor tensor_;
  bool doubled_;
  Ty dom_;
  Ty cod_;
  std::vector<int> dom_caps_;
  std::vector<int> cod_caps_;
};

EvalResult evaluate(const Diagram& d, const EvalOptions& opts = {});

/// <target| rho |target>; NotAState if rho is not a state within 1e-8.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target);

}  // namespace photonet
