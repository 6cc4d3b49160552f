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

#include "photonet/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

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

Ty drop_env(const Ty& ty, int n_env) {
  if (n_env < 0 || static_cast<size_t>(n_env) > ty.size()) {
    throw TypeMismatch("environment larger than the Kraus codomain " + to_string(ty));
  }
  return ty.slice(0, ty.size() - static_cast<size_t>(n_env));
}

// Qubit Kraus dilation: qubit -> qubit (x) env qubit.
class QubitKrausBox final : public BoxImpl {
 public:
  QubitKrausBox(std::string name, double p, bool phase_flip)
      : BoxImpl(std::move(name), qubit, qubit.pow(2)), p_(p), phase_flip_(phase_flip) {}
  Json attrs() const override { return {{"p", p_}}; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    std::vector<BasisTransition> out;
    const int b = in[0];
    auto push = [&](int sys, int env, double amp) {
      if (amp != 0.0 && sys < out_caps[0] && env < out_caps[1]) out.push_back({{sys, env}, amp});
    };
    push(b, 0, std::sqrt(1.0 - p_));
    if (phase_flip_) {
      push(b, 1, b ? -std::sqrt(p_) : std::sqrt(p_));
    } else {
      push(1 - b, 1, std::sqrt(p_));
    }
    return out;
  }
  std::vector<int> forward_bounds(std::span<const int>) const override { return {1, 1}; }
  std::vector<int> backward_bounds(std::span<const int>) const override { return {1}; }
  Box conjugate() const override { return self(); }

 private:
  double p_;
  bool phase_flip_;
};

// Entrywise |.|^2 of a classical box: its action on the diagonal.
class SquaredModulusBox final : public BoxImpl {
 public:
  explicit SquaredModulusBox(Box inner) : BoxImpl(inner->name(), inner->dom(), inner->cod()), inner_(std::move(inner)) {}
  std::vector<Param> params() const override { return inner_->params(); }
  Json attrs() const override { return {{"squared", inner_->describe()}}; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    auto trs = inner_->transitions(in, out_caps);
    for (auto& t : trs) t.amp = std::norm(t.amp);
    return trs;
  }
  std::vector<int> forward_bounds(std::span<const int> in) const override { return inner_->forward_bounds(in); }
  std::vector<int> backward_bounds(std::span<const int> out) const override { return inner_->backward_bounds(out); }
  Box conjugate() const override { return self(); }

 private:
  Box inner_;
};

// Create with internal states, after inflation: each photon j in mode i is
// a^dagger(s_j) = sum_k s_jk a^dagger_{i,k}.
class InflatedCreateBox final : public BoxImpl {
 public:
  InflatedCreateBox(std::vector<int> occ, std::vector<InternalState> states, int dim)
      : BoxImpl("InflatedCreate", Ty(), Ty::repeat(WireType::qmode, static_cast<int>(occ.size()) * dim)),
        occ_(std::move(occ)),
        states_(std::move(states)),
        dim_(dim) {}
  Json attrs() const override {
    Json s = Json::array();
    for (const auto& st : states_) {
      Json v = Json::array();
      for (auto z : st) v.push_back(Json::array({z.real(), z.imag()}));
      s.push_back(v);
    }
    return {{"occupations", occ_}, {"internal_states", s}, {"dim", dim_}};
  }
  int photon_budget(std::span<const int>) const override { return std::accumulate(occ_.begin(), occ_.end(), 0); }
  std::vector<BasisTransition> transitions(std::span<const int>, std::span<const int> out_caps) const override {
    std::vector<int> mode_of;
    double norm = 1.0;
    for (size_t i = 0; i < occ_.size(); ++i) {
      for (int r = 0; r < occ_[i]; ++r) mode_of.push_back(static_cast<int>(i));
      norm /= std::sqrt(std::tgamma(occ_[i] + 1.0));
    }
    const size_t n = mode_of.size();
    std::map<std::vector<int>, Complex> acc;
    std::vector<int> choice(n, 0);
    while (true) {
      std::vector<int> o(occ_.size() * static_cast<size_t>(dim_), 0);
      Complex coeff = norm;
      for (size_t j = 0; j < n; ++j) {
        o[static_cast<size_t>(mode_of[j] * dim_ + choice[j])] += 1;
        coeff *= states_.empty() ? Complex(1.0) : states_[j][static_cast<size_t>(choice[j])];
      }
      for (int v : o) coeff *= std::sqrt(std::tgamma(v + 1.0));
      if (coeff != Complex(0.0)) acc[o] += coeff;
      size_t k = 0;
      while (k < n && ++choice[k] == dim_) choice[k++] = 0;
      if (k == n) break;
    }
    std::vector<BasisTransition> out;
    for (auto& [o, a] : acc) {
      bool fits = true;
      for (size_t w = 0; w < o.size(); ++w) fits = fits && o[w] < out_caps[w];
      if (fits && std::abs(a) > 1e-15) out.push_back({o, a});
    }
    return out;
  }
  std::vector<int> forward_bounds(std::span<const int>) const override {
    std::vector<int> b;
    for (int k : occ_) b.insert(b.end(), static_cast<size_t>(dim_), k);
    return b;
  }
  std::vector<int> backward_bounds(std::span<const int>) const override { return {}; }
  Box conjugate() const override {
    auto s = states_;
    for (auto& v : s) {
      for (auto& z : v) z = std::conj(z);
    }
    return std::make_shared<InflatedCreateBox>(occ_, std::move(s), dim_);
  }

 private:
  std::vector<int> occ_;
  std::vector<InternalState> states_;
  int dim_;
};

// DualRail with internal states after inflation: qubit -> (rail0 copies, rail1 copies).
class InflatedDualRailBox final : public BoxImpl {
 public:
  InflatedDualRailBox(int n, std::vector<InternalState> states, int dim)
      : BoxImpl("InflatedDualRail", Ty::repeat(WireType::qubit, n), Ty::repeat(WireType::qmode, 2 * n * dim)),
        n_(n),
        states_(std::move(states)),
        dim_(dim) {}
  Json attrs() const override {
    Json s = Json::array();
    for (const auto& st : states_) {
      Json v = Json::array();
      for (auto z : st) v.push_back(Json::array({z.real(), z.imag()}));
      s.push_back(v);
    }
    return {{"n", n_}, {"internal_states", s}, {"dim", dim_}};
  }
  int photon_budget(std::span<const int>) const override { return n_; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    std::vector<BasisTransition> out;
    std::vector<int> choice(static_cast<size_t>(n_), 0);
    while (true) {
      std::vector<int> o(static_cast<size_t>(2 * n_ * dim_), 0);
      Complex a = 1.0;
      bool fits = true;
      for (int q = 0; q < n_; ++q) {
        const size_t w = static_cast<size_t>((2 * q + in[static_cast<size_t>(q)]) * dim_ + choice[static_cast<size_t>(q)]);
        o[w] = 1;
        fits = fits && out_caps[w] > 1;
        a *= states_[static_cast<size_t>(q)][static_cast<size_t>(choice[static_cast<size_t>(q)])];
      }
      if (fits && std::abs(a) > 1e-15) out.push_back({o, a});
      size_t k = 0;
      while (k < choice.size() && ++choice[k] == dim_) choice[k++] = 0;
      if (k == choice.size()) break;
    }
    return out;
  }
  std::vector<int> forward_bounds(std::span<const int>) const override {
    return std::vector<int>(static_cast<size_t>(2 * n_ * dim_), 1);
  }
  std::vector<int> backward_bounds(std::span<const int>) const override {
    return std::vector<int>(static_cast<size_t>(n_), 1);
  }
  Box conjugate() const override {
    auto s = states_;
    for (auto& v : s) {
      for (auto& z : v) z = std::conj(z);
    }
    return std::make_shared<InflatedDualRailBox>(n_, std::move(s), dim_);
  }

 private:
  int n_;
  std::vector<InternalState> states_;
  int dim_;
};

}  // namespace

// ------------------------------------------------------------------ channel box

ChannelBox::ChannelBox(std::string name, Diagram kraus, int n_env, std::vector<Param> params, Json attrs)
    : BoxImpl(std::move(name), kraus.dom(), drop_env(kraus.cod(), n_env)),
      kraus_(std::move(kraus)),
      n_env_(n_env),
      params_(std::move(params)),
      attrs_(std::move(attrs)) {}

Json ChannelBox::attrs() const {
  Json j = attrs_;
  j["kraus"] = diagram_to_json(kraus_);
  j["n_env"] = n_env_;
  return j;
}

std::vector<BasisTransition> ChannelBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  if (n_env_ > 0) throw NotPure("channel '" + name() + "' has an environment and no pure tensor");
  const auto caps = plus_one(in);
  const Tensor t = evaluate_dense(kraus_, caps, out_caps);
  std::vector<BasisTransition> out;
  std::vector<int> full(in.begin(), in.end());
  full.resize(in.size() + out_caps.size());
  for_each_index(out_caps, [&](std::span<const int> y) {
    std::copy(y.begin(), y.end(), full.begin() + static_cast<long>(in.size()));
    const Complex a = t.at(full);
    if (a != Complex(0.0)) out.push_back({std::vector<int>(y.begin(), y.end()), a});
  });
  return out;
}

Tensor ChannelBox::dense(std::span<const int> in_caps, std::span<const int> out_caps) const {
  if (n_env_ > 0) throw NotPure("channel '" + name() + "' has an environment and no pure tensor");
  return evaluate_dense(kraus_, in_caps, out_caps);
}

std::vector<int> ChannelBox::forward_bounds(std::span<const int> in) const {
  auto out = propagate_forward(kraus_.flatten(), in);
  out.resize(cod().size());
  return out;
}

std::vector<int> ChannelBox::backward_bounds(std::span<const int> out) const {
  std::vector<int> full(out.begin(), out.end());
  full.resize(kraus_.cod().size(), kUnbounded);
  return propagate_backward(kraus_.flatten(), full);
}

Box ChannelBox::dagger() const {
  if (n_env_ > 0) throw DaggerUndefined("channel '" + name() + "' discards an environment and has no dagger");
  return std::make_shared<ChannelBox>(name(), kraus_.dagger(), 0, params_, attrs_);
}

Box ChannelBox::conjugate() const { return std::make_shared<ChannelBox>(name(), kraus_.conjugate(), n_env_, params_, attrs_); }

Box ChannelBox::substitute(const Bindings& b) const {
  std::vector<Param> ps;
  for (const auto& p : params_) ps.push_back(p.substitute(b));
  return std::make_shared<ChannelBox>(name(), kraus_.substitute(b), n_env_, ps, attrs_);
}

std::set<std::string> ChannelBox::free_symbols() const {
  auto s = kraus_.free_symbols();
  for (const auto& p : params_) {
    auto f = p.free_symbols();
    s.insert(f.begin(), f.end());
  }
  return s;
}

std::optional<Diagram> ChannelBox::expand() const {
  if (n_env_ == 0) return kraus_;
  return std::nullopt;
}

std::optional<DiagramSum> ChannelBox::derivative(const std::string& sym) const {
  if (!free_symbols().contains(sym)) return std::nullopt;
  if (n_env_ > 0) throw NoDerivative("channel '" + name() + "' with an environment has no pure derivative");
  return differentiate(kraus_, sym);
}

Diagram Channel(std::string name, const Diagram& kraus, int n_env) {
  return Diagram::from_box(std::make_shared<ChannelBox>(std::move(name), kraus, n_env));
}

Diagram Discard(const Ty& ty) {
  return Diagram::from_box(std::make_shared<ChannelBox>("Discard", Diagram::id(ty), static_cast<int>(ty.size())));
}

Diagram Discard(int n) { return Discard(Ty::repeat(WireType::qubit, n)); }

Diagram PhotonLoss(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("PhotonLoss expects 0 <= p <= 1, got " + std::to_string(p));
  // Beamsplitter into a vacuum environment mode, transmissivity sqrt(p).
  const double theta = std::acos(std::sqrt(p)) / kTwoPi;
  Diagram kraus = (Id(qmode) * Create({0})) >> TBS(theta);
  return Diagram::from_box(std::make_shared<ChannelBox>("PhotonLoss", kraus, 1, std::vector<Param>{Param(p)}));
}

Diagram BitFlip(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("BitFlip expects 0 <= p <= 1, got " + std::to_string(p));
  Diagram kraus = Diagram::from_box(std::make_shared<QubitKrausBox>("BitFlipKraus", p, false));
  return Diagram::from_box(std::make_shared<ChannelBox>("BitFlip", kraus, 1, std::vector<Param>{Param(p)}));
}

Diagram Dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("Dephasing expects 0 <= p <= 1, got " + std::to_string(p));
  Diagram kraus = Diagram::from_box(std::make_shared<QubitKrausBox>("DephasingKraus", p, true));
  return Diagram::from_box(std::make_shared<ChannelBox>("Dephasing", kraus, 1, std::vector<Param>{Param(p)}));
}

// ------------------------------------------------------------------ doubling

bool is_pure(const Diagram& d) {
  const Diagram flat = d.flatten();
  for (auto t : flat.wire_types()) {
    if (is_classical(t)) return false;
  }
  for (const auto& n : flat.nodes()) {
    if (auto* c = dynamic_cast<const ChannelBox*>(n.box.get()); c && c->n_env() > 0) return false;
  }
  return true;
}

Ty doubled_type(const Ty& ty) {
  std::vector<WireType> out;
  for (auto t : ty) {
    out.push_back(t);
    if (is_quantum(t)) out.push_back(t);
  }
  return Ty(std::move(out));
}

namespace {

// A wire of the original diagram in the doubled one: (ket, bra) or (classical, -).
struct Pair {
  Wire a;
  std::optional<Wire> b;
};

std::vector<Pair> apply_doubled(Builder& b, const Diagram& d, const std::vector<Pair>& inputs);

std::vector<Wire> flat_wires(const std::vector<Pair>& ps) {
  std::vector<Wire> out;
  for (const auto& p : ps) {
    out.push_back(p.a);
    if (p.b) out.push_back(*p.b);
  }
  return out;
}

std::vector<Pair> pair_up(const Ty& ty, const std::vector<Wire>& wires) {
  std::vector<Pair> out;
  size_t k = 0;
  for (auto t : ty) {
    if (is_quantum(t)) {
      out.push_back({wires[k], wires[k + 1]});
      k += 2;
    } else {
      out.push_back({wires[k], std::nullopt});
      k += 1;
    }
  }
  return out;
}

void close_pair(Builder& b, WireType t, const Pair& p) {
  if (p.b) {
    b.apply(Copy(t, 2, 0), {p.a, *p.b});
  } else {
    b.apply(Copy(t, 1, 0), {p.a});
  }
}

std::vector<Pair> apply_doubled(Builder& b, const Diagram& d, const std::vector<Pair>& inputs) {
  const Diagram flat = d.flatten();
  std::map<int, Pair> wire;
  for (size_t i = 0; i < flat.dom_wires().size(); ++i) wire.emplace(flat.dom_wires()[i], inputs[i]);
  for (const auto& node : flat.nodes()) {
    const BoxImpl& box = *node.box;
    std::vector<Pair> ins;
    for (int w : node.ins) ins.push_back(wire.at(w));

    if (auto* ch = dynamic_cast<const ChannelBox*>(&box); ch && ch->n_env() > 0) {
      auto outs = apply_doubled(b, ch->kraus(), ins);
      const Ty kc = ch->kraus().cod();
      const size_t keep = kc.size() - static_cast<size_t>(ch->n_env());
      for (size_t k = keep; k < outs.size(); ++k) close_pair(b, kc[k], outs[k]);
      for (size_t k = 0; k < keep; ++k) wire.emplace(node.outs[k], outs[k]);
      continue;
    }

    bool classical = true;
    for (auto t : box.dom()) classical = classical && is_classical(t);
    for (auto t : box.cod()) classical = classical && is_classical(t);
    if (classical) {
      std::vector<Wire> in;
      for (const auto& p : ins) in.push_back(p.a);
      auto out = b.apply(std::make_shared<SquaredModulusBox>(node.box), in);
      for (size_t k = 0; k < out.size(); ++k) wire.emplace(node.outs[k], Pair{out[k], std::nullopt});
      continue;
    }

    std::vector<Wire> ket_in, bra_in;
    for (size_t k = 0; k < ins.size(); ++k) {
      if (ins[k].b) {
        ket_in.push_back(ins[k].a);
        bra_in.push_back(*ins[k].b);
      } else {
        auto split = b.apply(Copy(box.dom()[k], 1, 2), {ins[k].a});
        ket_in.push_back(split[0]);
        bra_in.push_back(split[1]);
      }
    }
    auto ket_out = b.apply(node.box, ket_in);
    auto bra_out = b.apply(node.box->conjugate(), bra_in);
    for (size_t k = 0; k < ket_out.size(); ++k) {
      const WireType t = box.cod()[k];
      if (is_quantum(t)) {
        wire.emplace(node.outs[k], Pair{ket_out[k], bra_out[k]});
      } else {
        auto merged = b.apply(Copy(t, 2, 1), {ket_out[k], bra_out[k]});
        wire.emplace(node.outs[k], Pair{merged[0], std::nullopt});
      }
    }
  }
  for (auto s : flat.scalars()) b.scalar(std::norm(s));
  std::vector<Pair> out;
  for (int w : flat.cod_wires()) out.push_back(wire.at(w));
  return out;
}

}  // namespace

Diagram double_diagram(const Diagram& d) {
  return build_named(doubled_type(d.dom()), [&](Builder& b, const std::vector<Wire>& in) {
    return flat_wires(apply_doubled(b, d, pair_up(d.dom(), in)));
  });
}

// ------------------------------------------------------------------ inflation

namespace {

bool touches_qmode(const BoxImpl& box) {
  for (auto t : box.dom()) {
    if (t == WireType::qmode) return true;
  }
  for (auto t : box.cod()) {
    if (t == WireType::qmode) return true;
  }
  return false;
}

void check_states(const std::vector<InternalState>& states, int photons, int dim, const std::string& who) {
  if (states.empty()) {
    if (photons > 0 && dim > 1) {
      throw MissingInternalState(who + " emits photons without internal states while inflating to dimension " +
                                 std::to_string(dim));
    }
    return;
  }
  for (const auto& s : states) {
    if (static_cast<int>(s.size()) != dim) {
      throw DimensionMismatch(who + " has internal states of dimension " + std::to_string(s.size()) +
                              ", inflating to " + std::to_string(dim));
    }
  }
}

void check_all(const Diagram& d, int dim) {
  const Diagram flat = d.flatten();
  for (const auto& n : flat.nodes()) {
    if (auto* c = dynamic_cast<const CreateBox*>(n.box.get())) {
      const auto& o = c->occupations();
      check_states(c->internal_states(), std::accumulate(o.begin(), o.end(), 0), dim, "Create");
    } else if (auto* r = dynamic_cast<const DualRailBox*>(n.box.get())) {
      check_states(r->internal_states(), r->n(), dim, "DualRail");
    } else if (auto* ch = dynamic_cast<const ChannelBox*>(n.box.get())) {
      check_all(ch->kraus(), dim);
    } else if (auto* g = dynamic_cast<const BitControlledGateBox*>(n.box.get())) {
      check_all(g->body(), dim);
    }
  }
}

Ty inflate_type(const Ty& ty, int dim) {
  std::vector<WireType> out;
  for (auto t : ty) {
    const int k = t == WireType::qmode ? dim : 1;
    for (int i = 0; i < k; ++i) out.push_back(t);
  }
  return Ty(std::move(out));
}

Diagram inflate_flat(const Diagram& d, int dim);

std::vector<std::vector<Wire>> group(const Ty& ty, const std::vector<Wire>& wires, int dim) {
  std::vector<std::vector<Wire>> out;
  size_t k = 0;
  for (auto t : ty) {
    const size_t n = t == WireType::qmode ? static_cast<size_t>(dim) : 1;
    out.emplace_back(wires.begin() + static_cast<long>(k), wires.begin() + static_cast<long>(k + n));
    k += n;
  }
  return out;
}

std::vector<Wire> concat(const std::vector<std::vector<Wire>>& g) {
  std::vector<Wire> out;
  for (const auto& v : g) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Diagram inflate_flat(const Diagram& d, int dim) {
  const Diagram flat = d.flatten();
  return build_named(inflate_type(flat.dom(), dim), [&](Builder& b, const std::vector<Wire>& in) {
    std::map<int, std::vector<Wire>> wire;
    const auto g = group(flat.dom(), in, dim);
    for (size_t i = 0; i < g.size(); ++i) wire[flat.dom_wires()[i]] = g[i];
    for (const auto& node : flat.nodes()) {
      const BoxImpl& box = *node.box;
      std::vector<std::vector<Wire>> ins;
      for (int w : node.ins) ins.push_back(wire.at(w));
      std::vector<std::vector<Wire>> outs;

      if (!touches_qmode(box)) {
        for (auto w : b.apply(node.box, concat(ins))) outs.push_back({w});
      } else if (box.role() == BoxRole::linear_optical) {
        outs.assign(ins.size(), std::vector<Wire>(static_cast<size_t>(dim), Wire{-1}));
        for (int c = 0; c < dim; ++c) {
          std::vector<Wire> copy_in;
          for (const auto& v : ins) copy_in.push_back(v[static_cast<size_t>(c)]);
          auto r = b.apply(node.box, copy_in);
          for (size_t k = 0; k < r.size(); ++k) outs[k][static_cast<size_t>(c)] = r[k];
        }
      } else if (auto* cr = dynamic_cast<const CreateBox*>(&box)) {
        auto r = b.apply(std::make_shared<InflatedCreateBox>(cr->occupations(), cr->internal_states(), dim),
                         std::span<const Wire>());
        outs = group(box.cod(), r, dim);
      } else if (auto* dr = dynamic_cast<const DualRailBox*>(&box)) {
        if (dr->internal_states().empty()) throw MissingInternalState("DualRail without internal states");
        auto r = b.apply(std::make_shared<InflatedDualRailBox>(dr->n(), dr->internal_states(), dim), concat(ins));
        outs = group(box.cod(), r, dim);
      } else if (auto* se = dynamic_cast<const SelectBox*>(&box)) {
        for (int k : se->occupations()) {
          if (k != 0) throw InflationUnsupported("Select of photons does not inflate (internal states unspecified)");
        }
        b.apply(Select(std::vector<int>(static_cast<size_t>(dim) * se->occupations().size(), 0)), concat(ins));
      } else if (auto* me = dynamic_cast<const MeasureBox*>(&box); me && me->kind() == MeasureKind::measure) {
        for (size_t k = 0; k < ins.size(); ++k) {
          if (box.dom()[k] == WireType::qmode) {
            auto m = b.apply(NumberResolvingMeasurement(dim), ins[k]);
            outs.push_back(b.apply(Add(dim), m));
          } else {
            outs.push_back(b.apply(Measure(Ty(box.dom()[k])), ins[k]));
          }
        }
      } else if (auto* ch = dynamic_cast<const ChannelBox*>(&box)) {
        const Ty env = ch->kraus().cod().slice(box.cod().size(), ch->kraus().cod().size());
        const int n_env = static_cast<int>(inflate_type(env, dim).size());
        Diagram k = inflate_flat(ch->kraus(), dim);
        auto r = b.apply(Diagram::from_box(std::make_shared<ChannelBox>(box.name(), k, n_env, box.params())), concat(ins));
        outs = group(box.cod(), r, dim);
      } else if (auto* cg = dynamic_cast<const BitControlledGateBox*>(&box)) {
        auto r = b.apply(Diagram::from_box(std::make_shared<BitControlledGateBox>(inflate_flat(cg->body(), dim), box.name())),
                         concat(ins));
        outs = group(box.cod(), r, dim);
      } else {
        throw InflationUnsupported("box '" + box.name() + "' acting on qmodes cannot be inflated");
      }
      for (size_t k = 0; k < node.outs.size(); ++k) wire[node.outs[k]] = outs[k];
    }
    for (auto s : flat.scalars()) b.scalar(s);
    std::vector<Wire> out;
    for (int w : flat.cod_wires()) {
      const auto& v = wire.at(w);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  });
}

}  // namespace

Diagram inflate(const Diagram& d, int dim) {
  if (dim < 1) throw RangeError("inflation dimension must be at least 1");
  check_all(d, dim);
  if (dim == 1) return d;
  return inflate_flat(d, dim);
}

// ------------------------------------------------------------------ evaluation

EvalResult::EvalResult(Tensor tensor, bool doubled, Ty dom, Ty cod, std::vector<int> dom_caps, std::vector<int> cod_caps)
    : tensor_(std::move(tensor)),
      doubled_(doubled),
      dom_(std::move(dom)),
      cod_(std::move(cod)),
      dom_caps_(std::move(dom_caps)),
      cod_caps_(std::move(cod_caps)) {}

std::map<std::vector<int>, double> EvalResult::weights() const {
  if (!dom_.empty()) throw NotAState("outcome weights need a state (empty domain), got domain " + to_string(dom_));
  std::map<std::vector<int>, double> out;
  std::vector<int> idx;
  for_each_index(cod_caps_, [&](std::span<const int> v) {
    double w;
    if (doubled_) {
      idx.clear();
      for (size_t k = 0; k < v.size(); ++k) {
        idx.push_back(v[k]);
        if (is_quantum(cod_[k])) idx.push_back(v[k]);
      }
      w = tensor_.at(idx).real();
    } else {
      w = std::norm(tensor_.at(v));
    }
    out[std::vector<int>(v.begin(), v.end())] = w;
  });
  return out;
}

std::map<std::vector<int>, double> EvalResult::prob_dist() const {
  auto w = weights();
  double total = 0.0;
  for (const auto& [k, v] : w) total += v;
  if (total <= 0.0) throw NotAState("total outcome weight is zero");
  for (auto& [k, v] : w) v /= total;
  return w;
}

Tensor EvalResult::amplitudes() const {
  if (doubled_) throw NotPure("amplitudes are only defined for pure diagrams");
  for (auto t : cod_) {
    if (is_classical(t)) throw NotPure("amplitudes are only defined for pure diagrams");
  }
  return tensor_;
}

Eigen::MatrixXcd EvalResult::density_matrix() const {
  if (!dom_.empty()) throw NotAState("density matrix needs a state (empty domain), got domain " + to_string(dom_));
  std::vector<size_t> quantum, classical;
  for (size_t k = 0; k < cod_.size(); ++k) (is_quantum(cod_[k]) ? quantum : classical).push_back(k);
  long dim = 1;
  for (size_t k : quantum) dim *= cod_caps_[k];
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<int> qcaps, ccaps;
  for (size_t k : quantum) qcaps.push_back(cod_caps_[k]);
  for (size_t k : classical) ccaps.push_back(cod_caps_[k]);
  // Row-major flattening of a quantum multi-index.
  auto flat = [&](std::span<const int> q) {
    long r = 0;
    for (size_t i = 0; i < q.size(); ++i) r = r * qcaps[i] + q[i];
    return r;
  };
  std::vector<int> v(cod_.size());
  for_each_index(ccaps, [&](std::span<const int> c) {
    for (size_t i = 0; i < classical.size(); ++i) v[classical[i]] = c[i];
    if (doubled_) {
      for_each_index(qcaps, [&](std::span<const int> q) {
        for_each_index(qcaps, [&](std::span<const int> qb) {
          std::vector<int> idx;
          size_t qi = 0;
          for (size_t k = 0; k < cod_.size(); ++k) {
            if (is_quantum(cod_[k])) {
              idx.push_back(q[qi]);
              idx.push_back(qb[qi]);
              ++qi;
            } else {
              idx.push_back(v[k]);
            }
          }
          rho(flat(q), flat(qb)) += tensor_.at(idx);
        });
      });
    } else {
      Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(dim);
      for_each_index(qcaps, [&](std::span<const int> q) {
        for (size_t i = 0; i < quantum.size(); ++i) v[quantum[i]] = q[i];
        amp(flat(q)) = tensor_.at(v);
      });
      rho += amp * amp.adjoint();
    }
  });
  return rho;
}

Complex EvalResult::scalar() const {
  if (tensor_.rank() != 0) {
    throw ShapeMismatch("scalar view needs a closed diagram, result has rank " + std::to_string(tensor_.rank()));
  }
  return tensor_[0];
}

namespace {

EvalResult from_sparse(const Diagram& d, const SparseState& s) {
  const Ty cod = d.cod();
  std::vector<int> caps(cod.size(), 1);
  for (const auto& [o, a] : s) {
    for (size_t k = 0; k < o.size(); ++k) caps[k] = std::max(caps[k], o[k] + 1);
  }
  for (size_t k = 0; k < cod.size(); ++k) {
    if (is_two_level(cod[k])) caps[k] = 2;
  }
  Tensor t(caps);
  for (const auto& [o, a] : s) t.at(o) += a;
  return EvalResult(std::move(t), false, Ty(), cod, {}, caps);
}

}  // namespace

EvalResult evaluate(const Diagram& d, const EvalOptions& opts) {
  if (auto syms = d.free_symbols(); !syms.empty()) {
    throw SymbolicDiagram("cannot evaluate with free symbol '" + *syms.begin() + "'");
  }
  if (opts.backend == Backend::permanent) {
    if (opts.force_doubled) throw BackendIneligible("the permanent backend evaluates pure diagrams only");
    return from_sparse(d, permanent_evaluate(d, opts.algo));
  }
  CompileOptions co;
  co.planner = opts.planner;
  const bool pure = !opts.force_doubled && is_pure(d);
  if (pure) {
    co.dom_caps = opts.dom_caps;
    co.cod_caps = opts.cod_caps;
    Compiled c = compile(d, co);
    EvalResult r(std::move(c.tensor), false, d.dom(), d.cod(), c.dom_caps, c.cod_caps);
    r.madds = c.madds;
    return r;
  }
  auto double_caps = [](const Ty& ty, const std::optional<std::vector<int>>& caps) -> std::optional<std::vector<int>> {
    if (!caps) return std::nullopt;
    std::vector<int> out;
    for (size_t k = 0; k < ty.size(); ++k) {
      out.push_back((*caps)[k]);
      if (is_quantum(ty[k])) out.push_back((*caps)[k]);
    }
    return out;
  };
  co.dom_caps = double_caps(d.dom(), opts.dom_caps);
  co.cod_caps = double_caps(d.cod(), opts.cod_caps);
  Compiled c = compile(double_diagram(d), co);
  auto single = [](const Ty& ty, const std::vector<int>& caps) {
    std::vector<int> out;
    size_t k = 0;
    for (auto t : ty) {
      out.push_back(caps[k]);
      k += is_quantum(t) ? 2 : 1;
    }
    return out;
  };
  EvalResult r(std::move(c.tensor), true, d.dom(), d.cod(), single(d.dom(), c.dom_caps), single(d.cod(), c.cod_caps));
  r.madds = c.madds;
  return r;
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& target) {
  if (rho.rows() != rho.cols() || rho.rows() != target.size()) {
    throw ShapeMismatch("fidelity: density matrix " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                        " against a target of length " + std::to_string(target.size()));
  }
  constexpr double tol = 1e-8;
  if (std::abs(rho.trace() - Complex(1.0)) > tol) {
    throw NotAState("density matrix has trace " + std::to_string(rho.trace().real()));
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw NotAState("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.eigenvalues().minCoeff() < -tol) throw NotAState("density matrix has a negative eigenvalue");
  if (std::abs(target.norm() - 1.0) > tol) throw NotAState("target state is not normalized");
  return (target.adjoint() * rho * target)(0, 0).real();
}

}  // namespace photonet
