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

#include <functional>
#include <optional>

#include "photonet/diagram.hpp"

namespace photonet {

using InternalState = std::vector<Complex>;

// ------------------------------------------------------------------ ZX

enum class SpiderColor { Z, X };

/// Z/X spider on qubit (or bit) legs, phase in turns.
class SpiderBox final : public BoxImpl {
 public:
  SpiderBox(SpiderColor color, int n_in, int n_out, Param phase, WireType type);
  SpiderColor color() const { return color_; }
  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const Param& phase() const { return phase_; }
  WireType type() const { return type_; }

  std::vector<Param> params() const override { return {phase_}; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override;
  Box substitute(const Bindings& b) const override;
  std::optional<DiagramSum> derivative(const std::string& sym) const override;

 private:
  SpiderColor color_;
  int n_in_, n_out_;
  Param phase_;
  WireType type_;
};

Diagram Z(int n_in, int n_out, Param phase = 0.0);
Diagram X(int n_in, int n_out, Param phase = 0.0);
/// Classical spiders acting on bits.
Diagram Zc(int n_in, int n_out, Param phase = 0.0);
Diagram Xc(int n_in, int n_out, Param phase = 0.0);
Diagram H();
/// Computational-basis preparations / effects on qubits.
Diagram Ket(std::vector<int> bits);
Diagram Bra(std::vector<int> bits);
/// Same on bits.
Diagram BitKet(std::vector<int> bits);
Diagram BitBra(std::vector<int> bits);
Diagram Scalar(Complex value);
Diagram Id(const Ty& ty);
Diagram Swap(const Ty& a, const Ty& b);

// ------------------------------------------------------------------ Fock

/// Copy spider on classical or quantum legs of any wire type: all legs equal.
class CopyBox final : public BoxImpl {
 public:
  CopyBox(WireType type, int n_in, int n_out);
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override { return self(); }
  BoxRole role() const override { return BoxRole::other; }

 private:
  WireType type_;
  int n_in_, n_out_;
};

Diagram Copy(WireType type, int n_in, int n_out);

class WBox final : public BoxImpl {
 public:
  WBox(int n, bool merge, WireType type);
  int n() const { return n_; }
  bool merge() const { return merge_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override { return self(); }
  BoxRole role() const override { return BoxRole::fock_local; }

 private:
  int n_;
  bool merge_;
  WireType type_;
};

/// Binomial split 1 -> n (merge = its dagger).
Diagram W(int n, WireType type = WireType::qmode);
Diagram WMerge(int n, WireType type = WireType::qmode);

class CreateBox final : public BoxImpl {
 public:
  CreateBox(std::vector<int> occupations, std::vector<InternalState> internal_states);
  const std::vector<int>& occupations() const { return occ_; }
  const std::vector<InternalState>& internal_states() const { return states_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  int photon_budget(std::span<const int>) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override;
  BoxRole role() const override { return states_.empty() ? BoxRole::source : BoxRole::other; }

 private:
  std::vector<int> occ_;
  std::vector<InternalState> states_;
};

class SelectBox final : public BoxImpl {
 public:
  explicit SelectBox(std::vector<int> occupations);
  const std::vector<int>& occupations() const { return occ_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int>) const override { return {}; }
  std::vector<int> backward_bounds(std::span<const int>) const override { return occ_; }
  Box dagger() const override;
  Box conjugate() const override { return self(); }
  BoxRole role() const override { return BoxRole::effect; }

 private:
  std::vector<int> occ_;
};

Diagram Create(std::vector<int> occupations, std::vector<InternalState> internal_states = {});
Diagram Select(std::vector<int> occupations);

class NumOpBox final : public BoxImpl {
 public:
  NumOpBox() : BoxImpl("NumOp", qmode, qmode) {}
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override { return {in[0]}; }
  std::vector<int> backward_bounds(std::span<const int> out) const override { return {out[0]}; }
  Box dagger() const override { return self(); }
  Box conjugate() const override { return self(); }
  BoxRole role() const override { return BoxRole::fock_local; }
};

Diagram NumOp();

// ------------------------------------------------------------------ linear optics

enum class LOKind { Phase, TBS, BBS, BS, MZI, HBS };

/// Passive linear-optical gate, lifted to Fock space through the
/// permanents of its single-photon matrix.
class LOGateBox final : public BoxImpl {
 public:
  LOGateBox(LOKind kind, std::vector<Param> params, bool daggered = false, bool conjugated = false);
  LOKind kind() const { return kind_; }
  int modes() const { return static_cast<int>(dom().size()); }

  std::vector<Param> params() const override { return params_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override;
  Box substitute(const Bindings& b) const override;
  std::optional<DiagramSum> derivative(const std::string& sym) const override;
  BoxRole role() const override { return BoxRole::linear_optical; }
  std::optional<Eigen::MatrixXcd> single_photon_matrix() const override;

  /// The same gate written with Phase and HadamardBS only.
  Diagram decomposition() const;

 private:
  LOKind kind_;
  std::vector<Param> params_;
  bool daggered_;
  bool conjugated_;
};

Diagram Phase(Param psi);
Diagram TBS(Param theta);
Diagram BBS(Param bias);
Diagram BS();
Diagram MZI(Param psi, Param phi);
Diagram HadamardBS();

/// Brick-wall MZI mesh on `width` modes with `layers` layers.
Diagram ansatz(int width, int layers);
/// Number of MZIs in ansatz(width, layers).
int ansatz_mzi_count(int width, int layers);

// ------------------------------------------------------------------ dual rail

class DualRailBox final : public BoxImpl {
 public:
  DualRailBox(int n, std::vector<InternalState> internal_states);
  int n() const { return n_; }
  int photon_budget(std::span<const int>) const override { return n_; }
  const std::vector<InternalState>& internal_states() const { return states_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;

 private:
  int n_;
  std::vector<InternalState> states_;
};

Diagram DualRail(int n, std::vector<InternalState> internal_states = {});

/// Phase on the |1>-rail of a dual-rail qubit.
Diagram PhaseShiftDR(Param psi);
/// Decodes a dual-rail qubit in the computational basis; off-code click
/// patterns carry no weight.
Diagram ZMeasurementDR();
/// HadamardBS followed by ZMeasurementDR.
Diagram XMeasurementDR();

// ------------------------------------------------------------------ measurement

enum class MeasureKind { measure, encode };

/// Computational/occupation-basis measurement (quantum -> classical) or its
/// converse preparation. The pure tensor is the identity; the classical/
/// quantum distinction is what doubling acts on.
class MeasureBox final : public BoxImpl {
 public:
  MeasureBox(MeasureKind kind, const Ty& quantum, std::string name = "");
  MeasureKind kind() const { return kind_; }
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override { return self(); }
  BoxRole role() const override;

 private:
  MeasureKind kind_;
};

/// qubit^n -> bit^n.
Diagram Measure(int n);
Diagram Encode(int n);
Diagram Measure(const Ty& quantum);
Diagram Encode(const Ty& classical);
/// qmode^n -> mode^n.
Diagram NumberResolvingMeasurement(int n);
/// qmode^n -> bit^n, occupation m -> min(m, 1).
Diagram ThresholdMeasurement(int n);

// ------------------------------------------------------------------ classical

using ClassicalFn = std::function<std::optional<std::vector<int>>(std::span<const int>)>;
using BoundFn = std::function<std::vector<int>(std::span<const int>)>;

/// Deterministic classical function on bit/mode wires. A missing result
/// means the input has no output (amplitude 0).
class ClassicalBox final : public BoxImpl {
 public:
  ClassicalBox(std::string name, Ty dom, Ty cod, Json attrs, ClassicalFn fn, BoundFn bounds);
  Json attrs() const override { return attrs_; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override { return bounds_(in); }
  Box conjugate() const override { return self(); }
  std::optional<std::vector<int>> apply(std::span<const int> in) const { return fn_(in); }

 private:
  Json attrs_;
  ClassicalFn fn_;
  BoundFn bounds_;
};

Diagram Not();
Diagram Xor();
Diagram And();
Diagram Or();
/// k modes -> 1 mode, sum of the values.
Diagram Add(int k);
/// (a, b) -> a - b; no output when a < b.
Diagram Sub();
Diagram Multiply();
/// (a, b) -> floor(a / b); b = 0 has amplitude 0 and raises a warning.
Diagram Divide();
/// mode -> bit, parity.
Diagram Mod2();
Diagram PostselectBit(int b);
/// bit^cols -> bit^rows over GF(2).
Diagram BinaryMatrix(std::vector<std::vector<int>> matrix);
/// Explicit input -> output table over capped values. `dom_caps` fixes the
/// domain the table must cover (TableIncomplete otherwise).
Diagram ClassicalFunction(const Ty& dom, const Ty& cod, std::vector<int> dom_caps,
                          std::map<std::vector<int>, std::vector<int>> table);

// ------------------------------------------------------------------ control

/// bit ⊗ A -> A: identity when the bit is 0, `body` when it is 1.
class BitControlledGateBox final : public BoxImpl {
 public:
  BitControlledGateBox(Diagram body, std::string name = "BitControlledGate");
  const Diagram& body() const { return body_; }
  std::vector<Param> params() const override;
  Json attrs() const override;
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const override;
  std::vector<int> forward_bounds(std::span<const int> in) const override;
  std::vector<int> backward_bounds(std::span<const int> out) const override;
  Box dagger() const override;
  Box conjugate() const override;
  Box substitute(const Bindings& b) const override;
  std::set<std::string> free_symbols() const override { return body_.free_symbols(); }
  std::optional<DiagramSum> derivative(const std::string& sym) const override;

 private:
  Diagram body_;
};

Diagram BitControlledGate(const Diagram& body);
Diagram CtrlX();
Diagram CtrlZ();
Diagram BitControlledPhaseShift(Param psi);

// ------------------------------------------------------------------ composites

/// A named box standing for a fixed diagram.
class CompositeBox final : public BoxImpl {
 public:
  CompositeBox(std::string name, Diagram body, std::vector<Param> params = {}, Json attrs = Json::object());
  std::vector<Param> params() const override { return params_; }
  Json attrs() const override { return attrs_; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override;
  Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const override;
  Box dagger() const override;
  Box conjugate() const override;
  Box substitute(const Bindings& b) const override;
  std::set<std::string> free_symbols() const override { return body_.free_symbols(); }
  std::optional<Diagram> expand() const override { return body_; }

 private:
  Diagram body_;
  std::vector<Param> params_;
  Json attrs_;
};

/// Rotated type-II fusion on two dual-rail qubits: qmode^4 -> bit^2
/// (success, parity). Success heralds the projection onto Phi+ (parity 0)
/// or Psi+ (parity 1).
Diagram FusionTypeII();
/// Classical table of FusionTypeII: click pattern -> (success, parity).
std::pair<int, int> fusion_type_ii_outcome(std::span<const int> clicks);
/// Type-I fusion: HadamardBS on the inner rails (a1, b0), both detected;
/// qmode^4 -> bit^2 ⊗ qmode^2 with the kept rails (a0, b1).
Diagram FusionTypeI();

// ------------------------------------------------------------------ custom

/// Extension point: a box given by an arbitrary transition rule.
class FunctionBox final : public BoxImpl {
 public:
  using Rule = std::function<std::vector<BasisTransition>(std::span<const int>, std::span<const int>)>;
  FunctionBox(std::string name, Ty dom, Ty cod, Rule rule, BoundFn bounds = nullptr);
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    return rule_(in, out_caps);
  }
  std::vector<int> forward_bounds(std::span<const int> in) const override;

 private:
  Rule rule_;
  BoundFn bounds_;
};

/// Derivative of a diagram by the product rule over its boxes; nullopt when
/// no box depends on `sym`.
std::optional<DiagramSum> differentiate(const Diagram& d, const std::string& sym);
std::optional<DiagramSum> differentiate(const DiagramSum& s, const std::string& sym);

}  // namespace photonet
