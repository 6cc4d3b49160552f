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

#include "photonet/compile_tn.hpp"
#include "photonet/errors.hpp"
#include "photonet/generators.hpp"
#include "photonet/io.hpp"

namespace photonet {

namespace {

std::vector<int> plus_one(std::span<const int> v) {
  std::vector<int> out(v.begin(), v.end());
  for (int& x : out) x += 1;
  return out;
}

// Column `in` of a dense [inputs..., outputs...] tensor as transitions.
std::vector<BasisTransition> column(const Tensor& t, std::span<const int> in, std::span<const int> out_caps) {
  std::vector<BasisTransition> out;
  std::vector<int> full(in.begin(), in.end());
  full.resize(in.size() + out_caps.size());
  for_each_index(out_caps, [&](std::span<const int> y) {
    std::copy(y.begin(), y.end(), full.begin() + static_cast<long>(in.size()));
    Complex a = t.at(full);
    if (a != Complex(0.0)) out.push_back({std::vector<int>(y.begin(), y.end()), a});
  });
  return out;
}

}  // namespace

// ------------------------------------------------------------------ controlled gates

BitControlledGateBox::BitControlledGateBox(Diagram body, std::string name)
    : BoxImpl(std::move(name), bit + body.dom(), body.cod()), body_(std::move(body)) {
  if (body_.dom() != body_.cod()) {
    throw TypeMismatch("controlled body must have equal domain and codomain, got " + to_string(body_.dom()) + " -> " +
                       to_string(body_.cod()));
  }
}

std::vector<Param> BitControlledGateBox::params() const { return {}; }

Json BitControlledGateBox::attrs() const { return {{"body", diagram_to_json(body_)}}; }

Tensor BitControlledGateBox::dense(std::span<const int> in_caps, std::span<const int> out_caps) const {
  std::vector<int> shape(in_caps.begin(), in_caps.end());
  shape.insert(shape.end(), out_caps.begin(), out_caps.end());
  Tensor t(shape);
  const auto body_in = in_caps.subspan(1);
  const size_t k = body_in.size();
  // Control 0: truncated identity.
  std::vector<int> idx(shape.size(), 0);
  std::vector<int> diag_caps;
  for (size_t i = 0; i < k; ++i) diag_caps.push_back(std::min(body_in[i], out_caps[i]));
  for_each_index(diag_caps, [&](std::span<const int> v) {
    idx[0] = 0;
    for (size_t i = 0; i < k; ++i) idx[1 + i] = idx[1 + k + i] = v[i];
    t.at(idx) = 1.0;
  });
  if (in_caps[0] > 1) {
    const Tensor b = evaluate_dense(body_, body_in, out_caps);
    const size_t block = b.size();
    std::copy(b.data().begin(), b.data().end(), t.data().begin() + static_cast<long>(block));
  }
  return t;
}

std::vector<BasisTransition> BitControlledGateBox::transitions(std::span<const int> in,
                                                               std::span<const int> out_caps) const {
  const auto rest = in.subspan(1);
  if (in[0] == 0) {
    for (size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] >= out_caps[i]) return {};
    }
    return {{std::vector<int>(rest.begin(), rest.end()), 1.0}};
  }
  const auto caps = plus_one(rest);
  return column(evaluate_dense(body_, caps, out_caps), rest, out_caps);
}

std::vector<int> BitControlledGateBox::forward_bounds(std::span<const int> in) const {
  const auto rest = in.subspan(1);
  auto out = propagate_forward(body_.flatten(), rest);
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], rest[i]);
  return out;
}

std::vector<int> BitControlledGateBox::backward_bounds(std::span<const int> out) const {
  auto in = propagate_backward(body_.flatten(), out);
  for (size_t i = 0; i < in.size(); ++i) in[i] = std::max(in[i], out[i]);
  in.insert(in.begin(), 1);
  return in;
}

Box BitControlledGateBox::dagger() const { return std::make_shared<BitControlledGateBox>(body_.dagger(), name()); }
Box BitControlledGateBox::conjugate() const {
  return std::make_shared<BitControlledGateBox>(body_.conjugate(), name());
}
Box BitControlledGateBox::substitute(const Bindings& b) const {
  return std::make_shared<BitControlledGateBox>(body_.substitute(b), name());
}

std::optional<DiagramSum> BitControlledGateBox::derivative(const std::string& sym) const {
  auto d = differentiate(body_, sym);
  if (!d) return std::nullopt;
  std::vector<Diagram> terms;
  for (const auto& t : d->terms()) terms.push_back(PostselectBit(1) * t);
  return DiagramSum(std::move(terms));
}

Diagram BitControlledGate(const Diagram& body) {
  return Diagram::from_box(std::make_shared<BitControlledGateBox>(body));
}
Diagram CtrlX() { return Diagram::from_box(std::make_shared<BitControlledGateBox>(X(1, 1, 0.5), "CtrlX")); }
Diagram CtrlZ() { return Diagram::from_box(std::make_shared<BitControlledGateBox>(Z(1, 1, 0.5), "CtrlZ")); }
Diagram BitControlledPhaseShift(Param psi) {
  return Diagram::from_box(std::make_shared<BitControlledGateBox>(Phase(psi), "BitControlledPhaseShift"));
}

// ------------------------------------------------------------------ composites

CompositeBox::CompositeBox(std::string name, Diagram body, std::vector<Param> params, Json attrs)
    : BoxImpl(std::move(name), body.dom(), body.cod()),
      body_(std::move(body)),
      params_(std::move(params)),
      attrs_(std::move(attrs)) {}

std::vector<BasisTransition> CompositeBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  const auto caps = plus_one(in);
  return column(evaluate_dense(body_, caps, out_caps), in, out_caps);
}

Tensor CompositeBox::dense(std::span<const int> in_caps, std::span<const int> out_caps) const {
  return evaluate_dense(body_, in_caps, out_caps);
}

Box CompositeBox::dagger() const {
  Json a = attrs_;
  a["dagger"] = !a.value("dagger", false);
  return std::make_shared<CompositeBox>(name(), body_.dagger(), params_, a);
}

Box CompositeBox::conjugate() const {
  Json a = attrs_;
  a["conjugate"] = !a.value("conjugate", false);
  return std::make_shared<CompositeBox>(name(), body_.conjugate(), params_, a);
}

Box CompositeBox::substitute(const Bindings& b) const {
  std::vector<Param> ps;
  for (const auto& p : params_) ps.push_back(p.substitute(b));
  return std::make_shared<CompositeBox>(name(), body_.substitute(b), ps, attrs_);
}

// ------------------------------------------------------------------ fusion

std::pair<int, int> fusion_type_ii_outcome(std::span<const int> c) {
  // After the rotation each heralded photon pair leaves one click in the
  // (a0, b1) beamsplitter and one in the (a1, b0) one. Clicks on (a0, a1) or
  // (b0, b1) herald Phi+, clicks on (a0, b0) or (a1, b1) herald Psi+.
  //
  //   pattern (a0 a1 b0 b1)   success  parity
  //   1 1 0 0                 1        0
  //   0 0 1 1                 1        0
  //   1 0 1 0                 1        1
  //   0 1 0 1                 1        1
  //   anything else           0        0
  const bool success = c[0] + c[3] == 1 && c[1] + c[2] == 1;
  if (!success) return {0, 0};
  return {1, 1 - (c[0] + c[2]) % 2};
}

Diagram FusionTypeII() {
  auto table = std::make_shared<ClassicalBox>(
      "FusionTypeIIOutcome", mode.pow(4), bit.pow(2), Json::object(),
      [](std::span<const int> in) -> std::optional<std::vector<int>> {
        auto [s, p] = fusion_type_ii_outcome(in);
        return std::vector<int>{s, p};
      },
      [](std::span<const int>) { return std::vector<int>{1, 1}; });
  Diagram body = build_named(qmode.pow(4), [&](Builder& b, const std::vector<Wire>& in) {
    auto a = b.apply(HadamardBS(), {in[0], in[1]});
    auto c = b.apply(HadamardBS(), {in[2], in[3]});
    auto p = b.apply(HadamardBS(), {a[0], c[1]});
    auto q = b.apply(HadamardBS(), {a[1], c[0]});
    auto clicks = b.apply(NumberResolvingMeasurement(4), {p[0], q[0], q[1], p[1]});
    return b.apply(Diagram::from_box(table), clicks);
  });
  return Diagram::from_box(std::make_shared<CompositeBox>("FusionTypeII", body));
}

Diagram FusionTypeI() {
  auto table = std::make_shared<ClassicalBox>(
      "FusionTypeIOutcome", mode.pow(2), bit.pow(2), Json::object(),
      [](std::span<const int> in) -> std::optional<std::vector<int>> {
        const bool success = in[0] + in[1] == 1;
        return std::vector<int>{success ? 1 : 0, success ? in[1] : 0};
      },
      [](std::span<const int>) { return std::vector<int>{1, 1}; });
  Diagram body = build_named(qmode.pow(4), [&](Builder& b, const std::vector<Wire>& in) {
    auto mixed = b.apply(HadamardBS(), {in[1], in[2]});
    auto clicks = b.apply(NumberResolvingMeasurement(2), mixed);
    auto bits = b.apply(Diagram::from_box(table), clicks);
    return std::vector<Wire>{bits[0], bits[1], in[0], in[3]};
  });
  return Diagram::from_box(std::make_shared<CompositeBox>("FusionTypeI", body));
}

// ------------------------------------------------------------------ custom

FunctionBox::FunctionBox(std::string name, Ty dom, Ty cod, Rule rule, BoundFn bounds)
    : BoxImpl(std::move(name), std::move(dom), std::move(cod)), rule_(std::move(rule)), bounds_(std::move(bounds)) {}

std::vector<int> FunctionBox::forward_bounds(std::span<const int> in) const {
  if (bounds_) return bounds_(in);
  return default_bounds(cod());
}

// ------------------------------------------------------------------ derivatives

std::optional<DiagramSum> differentiate(const Diagram& d, const std::string& sym) {
  const Diagram flat = d.flatten();
  std::vector<Diagram> terms;
  for (size_t i = 0; i < flat.nodes().size(); ++i) {
    const auto& box = flat.nodes()[i].box;
    if (!box->free_symbols().contains(sym)) continue;
    auto db = box->derivative(sym);
    if (!db) continue;
    for (const auto& t : db->terms()) terms.push_back(flat.replace_node(i, t));
  }
  if (terms.empty()) return std::nullopt;
  return DiagramSum(std::move(terms));
}

std::optional<DiagramSum> differentiate(const DiagramSum& s, const std::string& sym) {
  std::vector<Diagram> terms;
  for (const auto& d : s.terms()) {
    auto dd = differentiate(d, sym);
    if (dd) terms.insert(terms.end(), dd->terms().begin(), dd->terms().end());
  }
  if (terms.empty()) return std::nullopt;
  return DiagramSum(std::move(terms));
}

}  // namespace photonet
