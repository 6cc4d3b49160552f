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

#include "photonet/diagram.hpp"

#include <algorithm>
#include <numeric>

#include "photonet/errors.hpp"

namespace photonet {

namespace {

std::string mismatch_message(const Ty& a, const Ty& b, const std::string& what) {
  size_t n = std::min(a.size(), b.size());
  size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  std::string msg = what + ": " + to_string(a) + " vs " + to_string(b) + " (first difference at index " +
                    std::to_string(i) + ")";
  return msg;
}

// Box wrapping another box's adjoint; the transitions are found by brute
// force over the inner box's inputs.
class DaggerBox final : public BoxImpl {
 public:
  explicit DaggerBox(Box inner) : BoxImpl(inner->name(), inner->cod(), inner->dom()), inner_(std::move(inner)) {}

  std::vector<Param> params() const override { return inner_->params(); }
  Json attrs() const override { return {{"dagger", inner_->describe()}}; }

  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    std::vector<int> probe_caps(in.begin(), in.end());
    for (int& c : probe_caps) c += 1;
    std::vector<BasisTransition> out;
    for_each_index(out_caps, [&](std::span<const int> y) {
      for (const auto& t : inner_->transitions(y, probe_caps)) {
        if (std::equal(t.out.begin(), t.out.end(), in.begin())) {
          out.push_back({std::vector<int>(y.begin(), y.end()), std::conj(t.amp)});
        }
      }
    });
    return out;
  }
  Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const override {
    Tensor t = inner_->dense(out_caps, in_caps).conj();
    std::vector<int> perm;
    size_t a = out_caps.size(), b = in_caps.size();
    for (size_t i = 0; i < b; ++i) perm.push_back(static_cast<int>(a + i));
    for (size_t i = 0; i < a; ++i) perm.push_back(static_cast<int>(i));
    return t.permuted(perm);
  }
  std::vector<int> forward_bounds(std::span<const int> in) const override { return inner_->backward_bounds(in); }
  std::vector<int> backward_bounds(std::span<const int> out) const override { return inner_->forward_bounds(out); }
  Box dagger() const override { return inner_; }
  Box conjugate() const override { return inner_->conjugate()->dagger(); }
  Box substitute(const Bindings& b) const override { return inner_->substitute(b)->dagger(); }
  std::set<std::string> free_symbols() const override { return inner_->free_symbols(); }
  std::optional<Diagram> expand() const override {
    auto e = inner_->expand();
    if (!e) return std::nullopt;
    return e->dagger();
  }
  std::optional<DiagramSum> derivative(const std::string& sym) const override {
    auto d = inner_->derivative(sym);
    if (!d) return std::nullopt;
    return d->dagger();
  }
  BoxRole role() const override {
    switch (inner_->role()) {
      case BoxRole::linear_optical:
        return BoxRole::linear_optical;
      case BoxRole::source:
        return BoxRole::effect;
      case BoxRole::effect:
        return BoxRole::source;
      case BoxRole::fock_local:
        return BoxRole::fock_local;
      default:
        return BoxRole::other;
    }
  }
  std::optional<Eigen::MatrixXcd> single_photon_matrix() const override {
    auto u = inner_->single_photon_matrix();
    if (!u) return std::nullopt;
    return Eigen::MatrixXcd(u->adjoint());
  }

 private:
  Box inner_;
};

class ConjugateBox final : public BoxImpl {
 public:
  explicit ConjugateBox(Box inner) : BoxImpl(inner->name(), inner->dom(), inner->cod()), inner_(std::move(inner)) {}

  std::vector<Param> params() const override { return inner_->params(); }
  Json attrs() const override { return {{"conjugate", inner_->describe()}}; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
    auto ts = inner_->transitions(in, out_caps);
    for (auto& t : ts) t.amp = std::conj(t.amp);
    return ts;
  }
  Tensor dense(std::span<const int> in_caps, std::span<const int> out_caps) const override {
    return inner_->dense(in_caps, out_caps).conj();
  }
  std::vector<int> forward_bounds(std::span<const int> in) const override { return inner_->forward_bounds(in); }
  std::vector<int> backward_bounds(std::span<const int> out) const override { return inner_->backward_bounds(out); }
  int photon_budget(std::span<const int> in) const override { return inner_->photon_budget(in); }
  Box dagger() const override { return std::make_shared<DaggerBox>(self()); }
  Box conjugate() const override { return inner_; }
  Box substitute(const Bindings& b) const override { return inner_->substitute(b)->conjugate(); }
  std::set<std::string> free_symbols() const override { return inner_->free_symbols(); }
  std::optional<Diagram> expand() const override {
    auto e = inner_->expand();
    if (!e) return std::nullopt;
    return e->conjugate();
  }
  std::optional<DiagramSum> derivative(const std::string& sym) const override {
    auto d = inner_->derivative(sym);
    if (!d) return std::nullopt;
    return d->conjugate();
  }
  BoxRole role() const override { return inner_->role(); }
  std::optional<Eigen::MatrixXcd> single_photon_matrix() const override {
    auto u = inner_->single_photon_matrix();
    if (!u) return std::nullopt;
    return Eigen::MatrixXcd(u->conjugate());
  }

 private:
  Box inner_;
};

// Copies `src` into `dst`, identifying src's domain wires with `dom_map`.
// Returns the dst ids of src's codomain wires.
std::vector<int> inline_into(std::vector<WireType>& types, std::vector<Node>& nodes, std::vector<Complex>& scalars,
                             const Diagram& src, std::span<const int> dom_map) {
  std::vector<int> map(src.wire_types().size(), -1);
  for (size_t i = 0; i < src.dom_wires().size(); ++i) map[static_cast<size_t>(src.dom_wires()[i])] = dom_map[i];
  for (size_t w = 0; w < map.size(); ++w) {
    if (map[w] < 0) {
      map[w] = static_cast<int>(types.size());
      types.push_back(src.wire_types()[w]);
    }
  }
  for (const Node& n : src.nodes()) {
    Node copy{n.box, {}, {}};
    for (int w : n.ins) copy.ins.push_back(map[static_cast<size_t>(w)]);
    for (int w : n.outs) copy.outs.push_back(map[static_cast<size_t>(w)]);
    nodes.push_back(std::move(copy));
  }
  scalars.insert(scalars.end(), src.scalars().begin(), src.scalars().end());
  std::vector<int> cod;
  for (int w : src.cod_wires()) cod.push_back(map[static_cast<size_t>(w)]);
  return cod;
}

}  // namespace

// ---------------------------------------------------------------- params

Json param_to_json(const Param& p) {
  if (p.is_numeric()) return p.constant();
  if (p.is_bare_symbol()) return p.terms().begin()->first;
  Json terms = Json::object();
  for (const auto& [name, c] : p.terms()) terms[name] = c;
  return {{"const", p.constant()}, {"terms", terms}};
}

Param param_from_json(const Json& j) {
  if (j.is_number()) return Param(j.get<double>());
  if (j.is_string()) return Param::symbol(j.get<std::string>());
  if (j.is_object()) {
    Param p(j.value("const", 0.0));
    if (j.contains("terms")) {
      for (const auto& [name, c] : j.at("terms").items()) p = p + Param::symbol(name) * c.get<double>();
    }
    return p;
  }
  throw ParseError("parameter must be a number, a symbol name or an affine object");
}

// ---------------------------------------------------------------- boxes

Json BoxImpl::describe() const {
  Json params = Json::array();
  for (const auto& p : this->params()) params.push_back(param_to_json(p));
  Json dom = Json::array(), cod = Json::array();
  for (auto t : dom_) dom.push_back(to_string(t));
  for (auto t : cod_) cod.push_back(to_string(t));
  return {{"name", name_}, {"params", params}, {"attrs", attrs()}, {"dom", dom}, {"cod", cod}};
}

bool same_box(const BoxImpl& a, const BoxImpl& b) { return &a == &b || a.describe() == b.describe(); }

Tensor BoxImpl::dense(std::span<const int> in_caps, std::span<const int> out_caps) const {
  std::vector<int> shape(in_caps.begin(), in_caps.end());
  shape.insert(shape.end(), out_caps.begin(), out_caps.end());
  Tensor t(shape);
  std::vector<int> full(shape.size());
  for_each_index(in_caps, [&](std::span<const int> in) {
    for (const auto& tr : transitions(in, out_caps)) {
      if (tr.out.size() != out_caps.size()) throw CapOverflow(name_ + ": transition has wrong arity");
      for (size_t i = 0; i < out_caps.size(); ++i) {
        if (tr.out[i] < 0 || tr.out[i] >= out_caps[i]) {
          throw CapOverflow(name_ + ": transition to value " + std::to_string(tr.out[i]) + " exceeds cap " +
                            std::to_string(out_caps[i]));
        }
      }
      std::copy(in.begin(), in.end(), full.begin());
      std::copy(tr.out.begin(), tr.out.end(), full.begin() + static_cast<long>(in.size()));
      t.at(full) += tr.amp;
    }
  });
  return t;
}

std::vector<int> BoxImpl::default_bounds(const Ty& ty) const {
  std::vector<int> out;
  for (auto w : ty) out.push_back(is_two_level(w) ? 1 : kUnbounded);
  return out;
}

std::vector<int> BoxImpl::forward_bounds(std::span<const int> in) const {
  if (auto e = expand()) return propagate_forward(*e, in);
  return default_bounds(cod_);
}

std::vector<int> BoxImpl::backward_bounds(std::span<const int> out) const {
  if (auto e = expand()) return propagate_backward(*e, out);
  return default_bounds(dom_);
}

int BoxImpl::photon_budget(std::span<const int> in) const {
  const auto out = forward_bounds(in);
  int total = 0;
  for (size_t k = 0; k < out.size(); ++k) {
    if (is_fock(cod()[k])) total = sat_add(total, out[k]);
  }
  return total;
}

Box BoxImpl::dagger() const { return std::make_shared<DaggerBox>(self()); }
Box BoxImpl::conjugate() const { return std::make_shared<ConjugateBox>(self()); }
Box BoxImpl::substitute(const Bindings&) const { return self(); }

std::set<std::string> BoxImpl::free_symbols() const {
  std::set<std::string> out;
  for (const auto& p : params()) {
    auto s = p.free_symbols();
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::optional<Diagram> BoxImpl::expand() const { return std::nullopt; }

std::optional<DiagramSum> BoxImpl::derivative(const std::string& sym) const {
  if (!free_symbols().contains(sym)) return std::nullopt;
  if (auto e = expand()) {
    // Product rule over the boxes of the expansion.
    std::vector<Diagram> terms;
    const Diagram flat = e->flatten();
    for (size_t i = 0; i < flat.nodes().size(); ++i) {
      auto d = flat.nodes()[i].box->derivative(sym);
      if (!d) continue;
      for (const auto& t : d->terms()) terms.push_back(flat.replace_node(i, t));
    }
    if (terms.empty()) return std::nullopt;
    return DiagramSum(std::move(terms));
  }
  throw NoDerivative("box '" + name_ + "' has no derivative rule");
}

// ---------------------------------------------------------------- diagram

Diagram Diagram::id(const Ty& ty) {
  Diagram d;
  d.wire_types_ = ty.factors();
  d.dom_wires_.resize(ty.size());
  std::iota(d.dom_wires_.begin(), d.dom_wires_.end(), 0);
  d.cod_wires_ = d.dom_wires_;
  return d;
}

Diagram Diagram::from_box(Box box) {
  Diagram d;
  Node n{box, {}, {}};
  for (auto t : box->dom()) {
    n.ins.push_back(static_cast<int>(d.wire_types_.size()));
    d.dom_wires_.push_back(n.ins.back());
    d.wire_types_.push_back(t);
  }
  for (auto t : box->cod()) {
    n.outs.push_back(static_cast<int>(d.wire_types_.size()));
    d.cod_wires_.push_back(n.outs.back());
    d.wire_types_.push_back(t);
  }
  d.nodes_.push_back(std::move(n));
  return d;
}

Diagram Diagram::permutation(const Ty& dom, std::span<const int> perm) {
  if (perm.size() != dom.size()) throw TypeMismatch("permutation length differs from the domain");
  std::vector<char> seen(perm.size(), 0);
  Diagram d = id(dom);
  for (size_t i = 0; i < perm.size(); ++i) {
    int p = perm[i];
    if (p < 0 || static_cast<size_t>(p) >= perm.size() || seen[static_cast<size_t>(p)]) {
      throw TypeMismatch("not a permutation");
    }
    seen[static_cast<size_t>(p)] = 1;
    d.cod_wires_[i] = p;
  }
  return d;
}

Diagram Diagram::swap(const Ty& left, const Ty& right) {
  std::vector<int> perm;
  for (size_t i = 0; i < right.size(); ++i) perm.push_back(static_cast<int>(left.size() + i));
  for (size_t i = 0; i < left.size(); ++i) perm.push_back(static_cast<int>(i));
  return permutation(left + right, perm);
}

Diagram Diagram::scalar(Complex value) {
  Diagram d;
  d.scalars_.push_back(value);
  return d;
}

Ty Diagram::dom() const {
  std::vector<WireType> f;
  for (int w : dom_wires_) f.push_back(wire_types_[static_cast<size_t>(w)]);
  return Ty(std::move(f));
}

Ty Diagram::cod() const {
  std::vector<WireType> f;
  for (int w : cod_wires_) f.push_back(wire_types_[static_cast<size_t>(w)]);
  return Ty(std::move(f));
}

Complex Diagram::scalar_product() const {
  Complex s = 1.0;
  for (auto z : scalars_) s *= z;
  return s;
}

Diagram Diagram::then(const Diagram& next) const {
  if (cod() != next.dom()) throw TypeMismatch(mismatch_message(cod(), next.dom(), "sequential composition"));
  Diagram out = *this;
  out.cod_wires_ = inline_into(out.wire_types_, out.nodes_, out.scalars_, next, cod_wires_);
  return out;
}

Diagram Diagram::tensor(const Diagram& right) const {
  Diagram out = *this;
  std::vector<int> fresh;
  for (auto t : right.dom()) {
    fresh.push_back(static_cast<int>(out.wire_types_.size()));
    out.wire_types_.push_back(t);
  }
  out.dom_wires_.insert(out.dom_wires_.end(), fresh.begin(), fresh.end());
  auto cod = inline_into(out.wire_types_, out.nodes_, out.scalars_, right, fresh);
  out.cod_wires_.insert(out.cod_wires_.end(), cod.begin(), cod.end());
  return out;
}

Diagram Diagram::dagger() const {
  Diagram out;
  out.wire_types_ = wire_types_;
  out.dom_wires_ = cod_wires_;
  out.cod_wires_ = dom_wires_;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) out.nodes_.push_back({it->box->dagger(), it->outs, it->ins});
  for (auto z : scalars_) out.scalars_.push_back(std::conj(z));
  return out;
}

Diagram Diagram::conjugate() const {
  Diagram out = *this;
  for (auto& n : out.nodes_) n.box = n.box->conjugate();
  for (auto& z : out.scalars_) z = std::conj(z);
  return out;
}

Diagram Diagram::substitute(const Bindings& bindings, bool strict) const {
  const auto syms = free_symbols();
  for (const auto& [name, value] : bindings) {
    if (!syms.contains(name)) {
      if (strict) throw UnknownSymbol("symbol '" + name + "' does not occur in the diagram");
    }
  }
  Diagram out = *this;
  for (auto& n : out.nodes_) {
    if (!n.box->free_symbols().empty()) n.box = n.box->substitute(bindings);
  }
  return out;
}

std::set<std::string> Diagram::free_symbols() const {
  std::set<std::string> out;
  for (const auto& n : nodes_) {
    auto s = n.box->free_symbols();
    out.insert(s.begin(), s.end());
  }
  return out;
}

Diagram Diagram::flatten() const {
  bool any = false;
  for (const auto& n : nodes_) any = any || n.box->expand().has_value();
  if (!any) return *this;
  Builder b(dom());
  std::vector<int> wire_map(wire_types_.size(), -1);
  for (size_t i = 0; i < dom_wires_.size(); ++i) wire_map[static_cast<size_t>(dom_wires_[i])] = b.inputs()[i].id;
  for (const Node& n : nodes_) {
    std::vector<Wire> ins;
    for (int w : n.ins) ins.push_back({wire_map[static_cast<size_t>(w)]});
    auto e = n.box->expand();
    auto outs = e ? b.apply(e->flatten(), ins) : b.apply(n.box, ins);
    for (size_t i = 0; i < n.outs.size(); ++i) wire_map[static_cast<size_t>(n.outs[i])] = outs[i].id;
  }
  for (auto z : scalars_) b.scalar(z);
  std::vector<Wire> outs;
  for (int w : cod_wires_) outs.push_back({wire_map[static_cast<size_t>(w)]});
  return b.finish(outs);
}

Diagram Diagram::replace_node(size_t index, const Diagram& replacement) const {
  const Node& target = nodes_.at(index);
  if (replacement.dom() != target.box->dom() || replacement.cod() != target.box->cod()) {
    throw TypeMismatch(mismatch_message(replacement.dom() + replacement.cod(),
                                        target.box->dom() + target.box->cod(), "node replacement"));
  }
  // Build with the builder so passthrough wires in the replacement are handled.
  Builder b(dom());
  std::vector<int> wire_map(wire_types_.size(), -1);
  for (size_t i = 0; i < dom_wires_.size(); ++i) wire_map[static_cast<size_t>(dom_wires_[i])] = b.inputs()[i].id;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    std::vector<Wire> ins;
    for (int w : n.ins) ins.push_back({wire_map[static_cast<size_t>(w)]});
    auto outs = k == index ? b.apply(replacement, ins) : b.apply(n.box, ins);
    for (size_t i = 0; i < n.outs.size(); ++i) wire_map[static_cast<size_t>(n.outs[i])] = outs[i].id;
  }
  for (auto z : scalars_) b.scalar(z);
  std::vector<Wire> outs;
  for (int w : cod_wires_) outs.push_back({wire_map[static_cast<size_t>(w)]});
  return b.finish(outs);
}

Diagram Diagram::with_scalar(Complex value) const {
  Diagram out = *this;
  out.scalars_.push_back(value);
  return out;
}

void Diagram::check() const {
  const size_t nw = wire_types_.size();
  std::vector<int> produced(nw, 0), consumed(nw, 0);
  for (int w : dom_wires_) produced.at(static_cast<size_t>(w))++;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    const std::string where = "node " + std::to_string(k) + " (" + n.box->name() + ")";
    if (n.ins.size() != n.box->dom().size() || n.outs.size() != n.box->cod().size()) {
      throw TypeMismatch(where + ": port count differs from box type");
    }
    for (size_t i = 0; i < n.ins.size(); ++i) {
      auto w = static_cast<size_t>(n.ins[i]);
      if (w >= nw || produced[w] != 1) throw TypeMismatch(where + ": input wire used before it is produced");
      if (wire_types_[w] != n.box->dom()[i]) {
        throw TypeMismatch(where + ": input " + std::to_string(i) + " has type " + to_string(wire_types_[w]) +
                           ", expected " + to_string(n.box->dom()[i]));
      }
      consumed[w]++;
    }
    for (size_t i = 0; i < n.outs.size(); ++i) {
      auto w = static_cast<size_t>(n.outs[i]);
      if (w >= nw) throw TypeMismatch(where + ": output wire out of range");
      if (wire_types_[w] != n.box->cod()[i]) {
        throw TypeMismatch(where + ": output " + std::to_string(i) + " has type " + to_string(wire_types_[w]) +
                           ", expected " + to_string(n.box->cod()[i]));
      }
      produced[w]++;
    }
  }
  for (int w : cod_wires_) consumed.at(static_cast<size_t>(w))++;
  for (size_t w = 0; w < nw; ++w) {
    if (produced[w] != 1 || consumed[w] != 1) {
      throw TypeMismatch("wire " + std::to_string(w) + " has " + std::to_string(produced[w]) + " producers and " +
                         std::to_string(consumed[w]) + " consumers");
    }
  }
}

bool Diagram::operator==(const Diagram& other) const {
  if (wire_types_ != other.wire_types_ || dom_wires_ != other.dom_wires_ || cod_wires_ != other.cod_wires_ ||
      scalars_ != other.scalars_ || nodes_.size() != other.nodes_.size()) {
    return false;
  }
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const Node& a = nodes_[k];
    const Node& b = other.nodes_[k];
    if (a.ins != b.ins || a.outs != b.outs || !same_box(*a.box, *b.box)) return false;
  }
  return true;
}

Diagram operator>>(const Diagram& a, const Diagram& b) { return a.then(b); }
Diagram operator*(const Diagram& a, const Diagram& b) { return a.tensor(b); }
Diagram operator*(const Diagram& d, Complex k) { return d.with_scalar(k); }
Diagram operator*(Complex k, const Diagram& d) { return d.with_scalar(k); }

Diagram tensor_all(std::span<const Diagram> parts) {
  Diagram out;
  for (const auto& p : parts) out = out.tensor(p);
  return out;
}

Diagram then_all(std::span<const Diagram> parts) {
  if (parts.empty()) return Diagram();
  Diagram out = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) out = out.then(parts[i]);
  return out;
}

std::vector<int> propagate_forward(const Diagram& d, std::span<const int> dom_bounds) {
  std::vector<int> bound(d.wire_types().size(), kUnbounded);
  for (size_t i = 0; i < d.dom_wires().size(); ++i) bound[static_cast<size_t>(d.dom_wires()[i])] = dom_bounds[i];
  for (const Node& n : d.nodes()) {
    std::vector<int> in;
    for (int w : n.ins) in.push_back(bound[static_cast<size_t>(w)]);
    auto out = n.box->forward_bounds(in);
    for (size_t i = 0; i < n.outs.size(); ++i) bound[static_cast<size_t>(n.outs[i])] = out[i];
  }
  std::vector<int> out;
  for (int w : d.cod_wires()) out.push_back(bound[static_cast<size_t>(w)]);
  return out;
}

std::vector<int> propagate_backward(const Diagram& d, std::span<const int> cod_bounds) {
  std::vector<int> bound(d.wire_types().size(), kUnbounded);
  for (size_t i = 0; i < d.cod_wires().size(); ++i) bound[static_cast<size_t>(d.cod_wires()[i])] = cod_bounds[i];
  for (auto it = d.nodes().rbegin(); it != d.nodes().rend(); ++it) {
    std::vector<int> out;
    for (int w : it->outs) out.push_back(bound[static_cast<size_t>(w)]);
    auto in = it->box->backward_bounds(out);
    for (size_t i = 0; i < it->ins.size(); ++i) bound[static_cast<size_t>(it->ins[i])] = in[i];
  }
  std::vector<int> out;
  for (int w : d.dom_wires()) out.push_back(bound[static_cast<size_t>(w)]);
  return out;
}

// ---------------------------------------------------------------- sums

DiagramSum::DiagramSum(const Diagram& d) : terms_{d} {}

DiagramSum::DiagramSum(std::vector<Diagram> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw EmptySum("a sum needs at least one term");
  const Ty dom = terms_.front().dom(), cod = terms_.front().cod();
  for (size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].dom() != dom) throw TypeMismatch(mismatch_message(dom, terms_[i].dom(), "sum term domain"));
    if (terms_[i].cod() != cod) throw TypeMismatch(mismatch_message(cod, terms_[i].cod(), "sum term codomain"));
  }
}

DiagramSum DiagramSum::dagger() const {
  std::vector<Diagram> t;
  for (const auto& d : terms_) t.push_back(d.dagger());
  return DiagramSum(std::move(t));
}

DiagramSum DiagramSum::conjugate() const {
  std::vector<Diagram> t;
  for (const auto& d : terms_) t.push_back(d.conjugate());
  return DiagramSum(std::move(t));
}

DiagramSum DiagramSum::substitute(const Bindings& bindings, bool strict) const {
  if (strict) {
    const auto syms = free_symbols();
    for (const auto& [name, v] : bindings) {
      if (!syms.contains(name)) throw UnknownSymbol("symbol '" + name + "' does not occur in the sum");
    }
  }
  std::vector<Diagram> t;
  for (const auto& d : terms_) t.push_back(d.substitute(bindings));
  return DiagramSum(std::move(t));
}

std::set<std::string> DiagramSum::free_symbols() const {
  std::set<std::string> out;
  for (const auto& d : terms_) {
    auto s = d.free_symbols();
    out.insert(s.begin(), s.end());
  }
  return out;
}

DiagramSum DiagramSum::scaled(Complex k) const {
  std::vector<Diagram> t;
  for (const auto& d : terms_) t.push_back(d.with_scalar(k));
  return DiagramSum(std::move(t));
}

DiagramSum operator+(const DiagramSum& a, const DiagramSum& b) {
  std::vector<Diagram> t = a.terms();
  t.insert(t.end(), b.terms().begin(), b.terms().end());
  return DiagramSum(std::move(t));
}

DiagramSum operator>>(const DiagramSum& a, const DiagramSum& b) {
  std::vector<Diagram> t;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) t.push_back(x >> y);
  }
  return DiagramSum(std::move(t));
}

DiagramSum operator*(const DiagramSum& a, const DiagramSum& b) {
  std::vector<Diagram> t;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) t.push_back(x * y);
  }
  return DiagramSum(std::move(t));
}

DiagramSum sum(std::vector<Diagram> terms) { return DiagramSum(std::move(terms)); }

// ---------------------------------------------------------------- builder

Builder::Builder(const Ty& dom) {
  d_ = Diagram::id(dom);
  d_.cod_wires_.clear();
  for (int w : d_.dom_wires_) inputs_.push_back({w});
  live_.assign(dom.size(), 1);
}

std::vector<Wire> Builder::apply(const Diagram& d, std::span<const Wire> ins) {
  const Ty dom = d.dom();
  if (ins.size() != dom.size()) {
    throw TypeMismatch("applied to " + std::to_string(ins.size()) + " wires, expected " +
                       std::to_string(dom.size()));
  }
  std::vector<int> ids;
  for (size_t i = 0; i < ins.size(); ++i) {
    auto w = static_cast<size_t>(ins[i].id);
    if (w >= live_.size() || !live_[w]) throw WireReuse("wire " + std::to_string(w) + " is already consumed");
    if (d_.wire_types_[w] != dom[i]) {
      throw TypeMismatch("argument " + std::to_string(i) + " has type " + to_string(d_.wire_types_[w]) +
                         ", expected " + to_string(dom[i]));
    }
    live_[w] = 0;
    ids.push_back(ins[i].id);
  }
  auto cod = inline_into(d_.wire_types_, d_.nodes_, d_.scalars_, d, ids);
  live_.resize(d_.wire_types_.size(), 0);
  std::vector<Wire> out;
  for (int w : cod) {
    live_[static_cast<size_t>(w)] = 1;
    out.push_back({w});
  }
  return out;
}

std::vector<Wire> Builder::apply(const Box& box, std::span<const Wire> ins) {
  return apply(Diagram::from_box(box), ins);
}

void Builder::scalar(Complex value) { d_.scalars_.push_back(value); }

Diagram Builder::finish(std::span<const Wire> outs) {
  std::vector<char> seen(live_.size(), 0);
  for (const auto& w : outs) {
    auto i = static_cast<size_t>(w.id);
    if (i >= live_.size() || !live_[i] || seen[i]) {
      throw WireReuse("output wire " + std::to_string(w.id) + " is consumed or repeated");
    }
    seen[i] = 1;
  }
  for (size_t i = 0; i < live_.size(); ++i) {
    if (live_[i] && !seen[i]) throw WireDropped("wire " + std::to_string(i) + " is never consumed");
  }
  Diagram out = d_;
  out.cod_wires_.clear();
  for (const auto& w : outs) out.cod_wires_.push_back(w.id);
  return out;
}

Diagram build_named(const Ty& dom, const WiringCallback& body) {
  Builder b(dom);
  auto outs = body(b, b.inputs());
  return b.finish(outs);
}

}  // namespace photonet
