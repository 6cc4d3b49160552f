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

#include <cmath>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

namespace {

class HadamardBox final : public BoxImpl {
 public:
  HadamardBox() : BoxImpl("H", qubit, qubit) {}
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int>) const override {
    const double r = std::sqrt(0.5);
    return {{{0}, r}, {{1}, in[0] == 0 ? r : -r}};
  }
  std::vector<int> forward_bounds(std::span<const int>) const override { return {1}; }
  std::vector<int> backward_bounds(std::span<const int>) const override { return {1}; }
  Box dagger() const override { return self(); }
  Box conjugate() const override { return self(); }
};

// Computational basis state (or effect, if `effect`).
class KetBox final : public BoxImpl {
 public:
  KetBox(std::vector<int> bits, WireType type, bool effect)
      : BoxImpl(effect ? "Bra" : "Ket", effect ? Ty::repeat(type, static_cast<int>(bits.size())) : Ty(),
                effect ? Ty() : Ty::repeat(type, static_cast<int>(bits.size()))),
        bits_(std::move(bits)),
        type_(type),
        effect_(effect) {
    for (int b : bits_) {
      if (b != 0 && b != 1) throw RangeError("basis bits must be 0 or 1");
    }
  }
  Json attrs() const override { return {{"bits", bits_}, {"type", to_string(type_)}}; }
  std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int>) const override {
    if (!effect_) return {{bits_, 1.0}};
    if (std::equal(in.begin(), in.end(), bits_.begin())) return {{{}, 1.0}};
    return {};
  }
  std::vector<int> forward_bounds(std::span<const int>) const override {
    return std::vector<int>(effect_ ? 0 : bits_.size(), 1);
  }
  std::vector<int> backward_bounds(std::span<const int>) const override {
    return std::vector<int>(effect_ ? bits_.size() : 0, 1);
  }
  Box dagger() const override { return std::make_shared<KetBox>(bits_, type_, !effect_); }
  Box conjugate() const override { return self(); }

 private:
  std::vector<int> bits_;
  WireType type_;
  bool effect_;
};

}  // namespace

// ------------------------------------------------------------------ spiders

SpiderBox::SpiderBox(SpiderColor color, int n_in, int n_out, Param phase, WireType type)
    : BoxImpl(color == SpiderColor::Z ? "Z" : "X", Ty::repeat(type, n_in), Ty::repeat(type, n_out)),
      color_(color),
      n_in_(n_in),
      n_out_(n_out),
      phase_(std::move(phase)),
      type_(type) {
  if (n_in < 0 || n_out < 0) throw RangeError("spider arity must be nonnegative");
  if (!is_two_level(type)) throw TypeMismatch("ZX spiders act on qubit or bit wires");
}

Json SpiderBox::attrs() const { return {{"n_in", n_in_}, {"n_out", n_out_}, {"type", to_string(type_)}}; }

std::vector<BasisTransition> SpiderBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  const double alpha = kTwoPi * phase_.value();
  const Complex rot = std::polar(1.0, alpha);
  std::vector<BasisTransition> out;
  if (color_ == SpiderColor::Z) {
    for (int b = 0; b < 2; ++b) {
      bool ok = true;
      for (int x : in) ok = ok && x == b;
      for (int c : out_caps) ok = ok && b < c;
      if (ok) out.push_back({std::vector<int>(static_cast<size_t>(n_out_), b), b ? rot : Complex(1.0)});
    }
    return out;
  }
  const int k = n_in_ + n_out_;
  const double norm = std::pow(std::sqrt(0.5), k);
  int parity_in = 0;
  for (int x : in) parity_in ^= x;
  for_each_index(out_caps, [&](std::span<const int> y) {
    int parity = parity_in;
    for (int v : y) parity ^= v;
    Complex amp = norm * (1.0 + (parity ? -rot : rot));
    if (std::abs(amp) > 1e-15) out.push_back({std::vector<int>(y.begin(), y.end()), amp});
  });
  return out;
}

std::vector<int> SpiderBox::forward_bounds(std::span<const int>) const {
  return std::vector<int>(static_cast<size_t>(n_out_), 1);
}
std::vector<int> SpiderBox::backward_bounds(std::span<const int>) const {
  return std::vector<int>(static_cast<size_t>(n_in_), 1);
}

Box SpiderBox::dagger() const { return std::make_shared<SpiderBox>(color_, n_out_, n_in_, -phase_, type_); }
Box SpiderBox::conjugate() const { return std::make_shared<SpiderBox>(color_, n_in_, n_out_, -phase_, type_); }
Box SpiderBox::substitute(const Bindings& b) const {
  return std::make_shared<SpiderBox>(color_, n_in_, n_out_, phase_.substitute(b), type_);
}

std::optional<DiagramSum> SpiderBox::derivative(const std::string& sym) const {
  const double c = phase_.coefficient(sym);
  if (c == 0.0) return std::nullopt;
  // b * e^{i alpha b} on the Z-basis value b: an extra leg post-selected on 1.
  const Complex k = Complex(0.0, kTwoPi * c);
  const Ty legs_out = Ty::repeat(type_, n_out_);
  Diagram effect = type_ == WireType::qubit ? Bra({1}) : BitBra({1});
  Diagram dz = Diagram::from_box(std::make_shared<SpiderBox>(SpiderColor::Z, n_in_, n_out_ + 1, phase_, type_)) >>
               (Id(legs_out) * effect);
  if (color_ == SpiderColor::Z) return DiagramSum(dz.with_scalar(k));
  if (type_ != WireType::qubit) throw NoDerivative("classical X spider has no derivative rule");
  Diagram hin, hout;
  for (int i = 0; i < n_in_; ++i) hin = hin * H();
  for (int i = 0; i < n_out_; ++i) hout = hout * H();
  return DiagramSum((hin >> dz >> hout).with_scalar(k));
}

Diagram Z(int n_in, int n_out, Param phase) {
  return Diagram::from_box(std::make_shared<SpiderBox>(SpiderColor::Z, n_in, n_out, std::move(phase), WireType::qubit));
}
Diagram X(int n_in, int n_out, Param phase) {
  return Diagram::from_box(std::make_shared<SpiderBox>(SpiderColor::X, n_in, n_out, std::move(phase), WireType::qubit));
}
Diagram Zc(int n_in, int n_out, Param phase) {
  return Diagram::from_box(std::make_shared<SpiderBox>(SpiderColor::Z, n_in, n_out, std::move(phase), WireType::bit));
}
Diagram Xc(int n_in, int n_out, Param phase) {
  return Diagram::from_box(std::make_shared<SpiderBox>(SpiderColor::X, n_in, n_out, std::move(phase), WireType::bit));
}

Diagram H() { return Diagram::from_box(std::make_shared<HadamardBox>()); }
Diagram Ket(std::vector<int> bits) {
  return Diagram::from_box(std::make_shared<KetBox>(std::move(bits), WireType::qubit, false));
}
Diagram Bra(std::vector<int> bits) {
  return Diagram::from_box(std::make_shared<KetBox>(std::move(bits), WireType::qubit, true));
}
Diagram BitKet(std::vector<int> bits) {
  return Diagram::from_box(std::make_shared<KetBox>(std::move(bits), WireType::bit, false));
}
Diagram BitBra(std::vector<int> bits) {
  return Diagram::from_box(std::make_shared<KetBox>(std::move(bits), WireType::bit, true));
}
Diagram Scalar(Complex value) { return Diagram::scalar(value); }
Diagram Id(const Ty& ty) { return Diagram::id(ty); }
Diagram Swap(const Ty& a, const Ty& b) { return Diagram::swap(a, b); }

// ------------------------------------------------------------------ copy

CopyBox::CopyBox(WireType type, int n_in, int n_out)
    : BoxImpl("Copy", Ty::repeat(type, n_in), Ty::repeat(type, n_out)), type_(type), n_in_(n_in), n_out_(n_out) {}

Json CopyBox::attrs() const { return {{"n_in", n_in_}, {"n_out", n_out_}, {"type", to_string(type_)}}; }

std::vector<BasisTransition> CopyBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  if (in.empty()) {
    // A pure "cup": every value that fits all outputs.
    int lim = out_caps.empty() ? 1 : kUnbounded;
    for (int c : out_caps) lim = std::min(lim, c);
    std::vector<BasisTransition> out;
    for (int v = 0; v < lim; ++v) out.push_back({std::vector<int>(static_cast<size_t>(n_out_), v), 1.0});
    return out;
  }
  const int v = in[0];
  for (int x : in) {
    if (x != v) return {};
  }
  for (int c : out_caps) {
    if (v >= c) return {};
  }
  return {{std::vector<int>(static_cast<size_t>(n_out_), v), 1.0}};
}

std::vector<int> CopyBox::forward_bounds(std::span<const int> in) const {
  int b = is_two_level(type_) ? 1 : kUnbounded;
  for (int x : in) b = std::min(b, x);
  return std::vector<int>(static_cast<size_t>(n_out_), b);
}

std::vector<int> CopyBox::backward_bounds(std::span<const int> out) const {
  int b = is_two_level(type_) ? 1 : kUnbounded;
  for (int x : out) b = std::min(b, x);
  return std::vector<int>(static_cast<size_t>(n_in_), b);
}

Box CopyBox::dagger() const { return std::make_shared<CopyBox>(type_, n_out_, n_in_); }

Diagram Copy(WireType type, int n_in, int n_out) {
  return Diagram::from_box(std::make_shared<CopyBox>(type, n_in, n_out));
}

}  // namespace photonet
