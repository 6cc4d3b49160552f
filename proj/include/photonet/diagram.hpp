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
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "photonet/tensor.hpp"
#include "photonet/types.hpp"

namespace photonet {

class BoxImpl;
class Diagram;
class DiagramSum;

using Box = std::shared_ptr<const BoxImpl>;
using Json = nlohmann::json;

/// One entry of a generator's action on a basis vector.
struct BasisTransition {
  std::vector<int> out;
  Complex amp;
};

/// Photon-number bound meaning "no constraint known".
inline constexpr int kUnbounded = 1 << 24;

inline int sat_add(int a, int b) { return (a >= kUnbounded || b >= kUnbounded) ? kUnbounded : std::min(a + b, kUnbounded); }
inline int sat_mul(int a, int b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  long long p = static_cast<long long>(a) * b;
  return p >= kUnbounded ? kUnbounded : static_cast<int>(p);
}

/// Coarse classification used by the permanent backend's eligibility check.
enum class BoxRole {
  other,
  linear_optical,  // passive gate with a single-photon matrix
  source,          // Fock-state preparation without internal states
  effect,          // Fock-state post-selection
  fock_local,      // number-basis operator on qmodes (NumOp, W nodes)
  readout,         // number-resolving measurement
};

/// A primitive generator. Its semantics is its truncation rule: the list of
/// basis transitions from an input basis vector, restricted to output caps.
///
/// Boxes are immutable and shared between diagrams.
class BoxImpl : public std::enable_shared_from_this<BoxImpl> {
 public:
  BoxImpl(std::string name, Ty dom, Ty cod) : name_(std::move(name)), dom_(std::move(dom)), cod_(std::move(cod)) {}
  virtual ~BoxImpl() = default;

  const std::string& name() const { return name_; }
  const Ty& dom() const { return dom_; }
  const Ty& cod() const { return cod_; }

  virtual std::vector<Param> params() const { return {}; }
  /// Generator-specific payload needed to rebuild the box (tables, states).
  virtual Json attrs() const { return Json::object(); }
  /// {"name", "params", "attrs"}: identifies the box structurally.
  Json describe() const;

  /// Transitions from basis vector `in`; every emitted `out` is within `out_caps`.
  virtual std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const = 0;
  /// Dense tensor with axes [inputs..., outputs...].
  virtual Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const;

  /// Upper bounds on output values given bounds on input values.
  virtual std::vector<int> forward_bounds(std::span<const int> in) const;
  /// Upper bounds on input values that can contribute, given output bounds.
  virtual std::vector<int> backward_bounds(std::span<const int> out) const;
  /// Upper bound on the photon total over the fock outputs.
  virtual int photon_budget(std::span<const int> in) const;

  virtual Box dagger() const;
  virtual Box conjugate() const;
  virtual Box substitute(const Bindings& bindings) const;
  virtual std::set<std::string> free_symbols() const;

  /// Composite boxes return the diagram they stand for.
  virtual std::optional<Diagram> expand() const;
  /// d/d(sym) as a formal sum of diagrams with this box's boundary; nullopt
  /// when the box does not depend on `sym`.
  virtual std::optional<DiagramSum> derivative(const std::string& sym) const;

  virtual BoxRole role() const { return BoxRole::other; }
  /// For passive linear-optical gates: the m x m single-photon matrix,
  /// entry (out, in).
  virtual std::optional<Eigen::MatrixXcd> single_photon_matrix() const { return std::nullopt; }

  Box self() const { return shared_from_this(); }

 protected:
  std::vector<int> default_bounds(const Ty& ty) const;

 private:
  std::string name_;
  Ty dom_;
  Ty cod_;
};

bool same_box(const BoxImpl& a, const BoxImpl& b);

Json param_to_json(const Param& p);
Param param_from_json(const Json& j);

struct Node {
  Box box;
  std::vector<int> ins;
  std::vector<int> outs;
};

/// A string diagram as a port graph: boxes in topological order whose ports
/// are connected by typed wire ids. Each wire has exactly one producer (a box
/// output or a domain port) and one consumer (a box input or a codomain port).
class Diagram {
 public:
  /// The empty diagram, identity on the unit type.
  Diagram() = default;

  static Diagram id(const Ty& ty);
  static Diagram from_box(Box box);
  static Diagram swap(const Ty& left, const Ty& right);
  /// Output i carries input perm[i].
  static Diagram permutation(const Ty& dom, std::span<const int> perm);
  static Diagram scalar(Complex value);

  Ty dom() const;
  Ty cod() const;
  const std::vector<WireType>& wire_types() const { return wire_types_; }
  const std::vector<int>& dom_wires() const { return dom_wires_; }
  const std::vector<int>& cod_wires() const { return cod_wires_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Complex>& scalars() const { return scalars_; }
  Complex scalar_product() const;

  Diagram then(const Diagram& next) const;
  Diagram tensor(const Diagram& right) const;
  Diagram dagger() const;
  /// Complex conjugate of every box and scalar; boundary unchanged.
  Diagram conjugate() const;
  Diagram substitute(const Bindings& bindings, bool strict = false) const;
  std::set<std::string> free_symbols() const;
  /// Recursively replaces composite boxes by their expansion.
  Diagram flatten() const;
  Diagram with_scalar(Complex value) const;
  /// Replaces node `index` by `replacement` (same boundary).
  Diagram replace_node(size_t index, const Diagram& replacement) const;

  /// Full well-typedness re-check; throws TypeMismatch on violation.
  void check() const;

  bool operator==(const Diagram& other) const;

 private:
  friend class Builder;
  std::vector<WireType> wire_types_;
  std::vector<int> dom_wires_;
  std::vector<int> cod_wires_;
  std::vector<Node> nodes_;
  std::vector<Complex> scalars_;
};

/// Sequential composition (`>>`).
Diagram operator>>(const Diagram& a, const Diagram& b);
/// Monoidal product. `*` shares the precedence of a multiplicative operator,
/// so `a * b >> c` groups as `(a * b) >> c`.
Diagram operator*(const Diagram& a, const Diagram& b);
Diagram operator*(const Diagram& d, Complex k);
Diagram operator*(Complex k, const Diagram& d);

/// Monoidal product of a list, left to right.
Diagram tensor_all(std::span<const Diagram> parts);
/// Sequential composition of a list, left to right.
Diagram then_all(std::span<const Diagram> parts);

/// A formal sum of diagrams sharing one boundary.
class DiagramSum {
 public:
  DiagramSum(const Diagram& d);  // NOLINT: a diagram is a one-term sum
  explicit DiagramSum(std::vector<Diagram> terms);

  Ty dom() const { return terms_.front().dom(); }
  Ty cod() const { return terms_.front().cod(); }
  const std::vector<Diagram>& terms() const { return terms_; }

  DiagramSum dagger() const;
  DiagramSum conjugate() const;
  DiagramSum substitute(const Bindings& bindings, bool strict = false) const;
  std::set<std::string> free_symbols() const;
  DiagramSum scaled(Complex k) const;

 private:
  std::vector<Diagram> terms_;
};

DiagramSum operator+(const DiagramSum& a, const DiagramSum& b);
DiagramSum operator>>(const DiagramSum& a, const DiagramSum& b);
DiagramSum operator*(const DiagramSum& a, const DiagramSum& b);
DiagramSum sum(std::vector<Diagram> terms);

/// Forward / backward photon-number bound propagation through a diagram,
/// box by box. Used by truncation inference and by composite boxes.
std::vector<int> propagate_forward(const Diagram& d, std::span<const int> dom_bounds);
std::vector<int> propagate_backward(const Diagram& d, std::span<const int> cod_bounds);

/// Named-wire construction ("function syntax"): boxes are applied to wire
/// handles and the resulting port graph needs no explicit swaps.
class Builder {
 public:
  struct Wire {
    int id;
    bool operator==(const Wire&) const = default;
  };

  explicit Builder(const Ty& dom);

  const std::vector<Wire>& inputs() const { return inputs_; }
  std::vector<Wire> apply(const Diagram& d, std::span<const Wire> ins);
  std::vector<Wire> apply(const Box& box, std::span<const Wire> ins);
  std::vector<Wire> apply(const Diagram& d, std::initializer_list<Wire> ins) {
    return apply(d, std::span<const Wire>(ins.begin(), ins.size()));
  }
  std::vector<Wire> apply(const Box& box, std::initializer_list<Wire> ins) {
    return apply(box, std::span<const Wire>(ins.begin(), ins.size()));
  }
  void scalar(Complex value);
  WireType type_of(Wire w) const { return d_.wire_types_[static_cast<size_t>(w.id)]; }
  Diagram finish(std::span<const Wire> outs);
  Diagram finish(std::initializer_list<Wire> outs) { return finish(std::span<const Wire>(outs.begin(), outs.size())); }

 private:
  Diagram d_;
  std::vector<Wire> inputs_;
  std::vector<char> live_;
};

using Wire = Builder::Wire;
using WiringCallback = std::function<std::vector<Wire>(Builder&, const std::vector<Wire>&)>;

/// Builds a diagram from a callback that consumes each input wire once and
/// returns the codomain wires.
Diagram build_named(const Ty& dom, const WiringCallback& body);

}  // namespace photonet
