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
#include <numeric>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

namespace {

double sqrt_multinomial(int m, std::span<const int> parts) {
  double l = std::lgamma(m + 1.0);
  for (int k : parts) l -= std::lgamma(k + 1.0);
  return std::exp(0.5 * l);
}

// Splits `m` into `n` nonnegative parts, part i < caps[i].
void for_each_split(int m, std::span<const int> caps, const std::function<void(std::span<const int>)>& fn) {
  const size_t n = caps.size();
  std::vector<int> parts(n, 0);
  std::function<void(size_t, int)> rec = [&](size_t i, int left) {
    if (i + 1 == n) {
      if (left < caps[i]) {
        parts[i] = left;
        fn(parts);
      }
      return;
    }
    for (int k = std::min(left, caps[i] - 1); k >= 0; --k) {
      parts[i] = k;
      rec(i + 1, left - k);
    }
  };
  if (n == 0) {
    if (m == 0) fn(parts);
    return;
  }
  rec(0, m);
}

void validate_states(const std::vector<InternalState>& states, size_t expected, const std::string& who) {
  if (states.empty()) return;
  if (states.size() != expected) {
    throw DimensionMismatch(who + ": expected " + std::to_string(expected) + " internal states, got " +
                            std::to_string(states.size()));
  }
  const size_t d = states.front().size();
  for (const auto& s : states) {
    if (s.size() != d || d == 0) throw DimensionMismatch(who + ": internal states must share one dimension");
    double norm = 0.0;
    for (auto z : s) norm += std::norm(z);
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-9) {
      throw NormError(who + ": internal state has norm " + std::to_string(std::sqrt(norm)));
    }
  }
}

Json states_json(const std::vector<InternalState>& states) {
  Json out = Json::array();
  for (const auto& s : states) {
    Json v = Json::array();
    for (auto z : s) v.push_back(Json::array({z.real(), z.imag()}));
    out.push_back(v);
  }
  return out;
}

WireType classical_of(WireType t) { return t == WireType::qubit ? WireType::bit : WireType::mode; }
WireType quantum_of(WireType t) { return t == WireType::bit ? WireType::qubit : WireType::qmode; }

Ty map_ty(const Ty& ty, WireType (*f)(WireType)) {
  std::vector<WireType> out;
  for (auto t : ty) out.push_back(f(t));
  return Ty(std::move(out));
}

}  // namespace

// ------------------------------------------------------------------ W

WBox::WBox(int n, bool merge, WireType type)
    : BoxImpl(merge ? "WMerge" : "W", merge ? Ty::repeat(type, n) : Ty(type), merge ? Ty(type) : Ty::repeat(type, n)),
      n_(n),
      merge_(merge),
      type_(type) {
  if (n < 1) throw RangeError("W node needs at least one branch");
  if (!is_fock(type)) throw TypeMismatch("W nodes act on mode or qmode wires");
}

Json WBox::attrs() const { return {{"n", n_}, {"type", to_string(type_)}}; }

std::vector<BasisTransition> WBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  std::vector<BasisTransition> out;
  if (!merge_) {
    for_each_split(in[0], out_caps, [&](std::span<const int> parts) {
      out.push_back({std::vector<int>(parts.begin(), parts.end()), sqrt_multinomial(in[0], parts)});
    });
    return out;
  }
  const int m = std::accumulate(in.begin(), in.end(), 0);
  if (m < out_caps[0]) out.push_back({{m}, sqrt_multinomial(m, in)});
  return out;
}

std::vector<int> WBox::forward_bounds(std::span<const int> in) const {
  if (!merge_) return std::vector<int>(static_cast<size_t>(n_), in[0]);
  int s = 0;
  for (int x : in) s = sat_add(s, x);
  return {s};
}

std::vector<int> WBox::backward_bounds(std::span<const int> out) const {
  if (merge_) return std::vector<int>(static_cast<size_t>(n_), out[0]);
  int s = 0;
  for (int x : out) s = sat_add(s, x);
  return {s};
}

Box WBox::dagger() const { return std::make_shared<WBox>(n_, !merge_, type_); }

Diagram W(int n, WireType type) { return Diagram::from_box(std::make_shared<WBox>(n, false, type)); }
Diagram WMerge(int n, WireType type) { return Diagram::from_box(std::make_shared<WBox>(n, true, type)); }

// ------------------------------------------------------------------ Create / Select

CreateBox::CreateBox(std::vector<int> occupations, std::vector<InternalState> internal_states)
    : BoxImpl("Create", Ty(), Ty::repeat(WireType::qmode, static_cast<int>(occupations.size()))),
      occ_(std::move(occupations)),
      states_(std::move(internal_states)) {
  for (int k : occ_) {
    if (k < 0) throw RangeError("occupations must be nonnegative");
  }
  validate_states(states_, static_cast<size_t>(std::accumulate(occ_.begin(), occ_.end(), 0)), "Create");
}

Json CreateBox::attrs() const {
  Json j = {{"occupations", occ_}};
  if (!states_.empty()) j["internal_states"] = states_json(states_);
  return j;
}

std::vector<BasisTransition> CreateBox::transitions(std::span<const int>, std::span<const int> out_caps) const {
  for (size_t i = 0; i < occ_.size(); ++i) {
    if (occ_[i] >= out_caps[i]) return {};
  }
  return {{occ_, 1.0}};
}

std::vector<int> CreateBox::forward_bounds(std::span<const int>) const { return occ_; }
int CreateBox::photon_budget(std::span<const int>) const { return std::accumulate(occ_.begin(), occ_.end(), 0); }
std::vector<int> CreateBox::backward_bounds(std::span<const int>) const { return {}; }

Box CreateBox::dagger() const {
  if (states_.empty()) return std::make_shared<SelectBox>(occ_);
  return BoxImpl::dagger();
}

Box CreateBox::conjugate() const {
  if (states_.empty()) return self();
  auto states = states_;
  for (auto& s : states) {
    for (auto& z : s) z = std::conj(z);
  }
  return std::make_shared<CreateBox>(occ_, std::move(states));
}

SelectBox::SelectBox(std::vector<int> occupations)
    : BoxImpl("Select", Ty::repeat(WireType::qmode, static_cast<int>(occupations.size())), Ty()),
      occ_(std::move(occupations)) {
  for (int k : occ_) {
    if (k < 0) throw RangeError("occupations must be nonnegative");
  }
}

Json SelectBox::attrs() const { return {{"occupations", occ_}}; }

std::vector<BasisTransition> SelectBox::transitions(std::span<const int> in, std::span<const int>) const {
  if (std::equal(in.begin(), in.end(), occ_.begin())) return {{{}, 1.0}};
  return {};
}

Box SelectBox::dagger() const { return std::make_shared<CreateBox>(occ_, std::vector<InternalState>{}); }

Diagram Create(std::vector<int> occupations, std::vector<InternalState> internal_states) {
  return Diagram::from_box(std::make_shared<CreateBox>(std::move(occupations), std::move(internal_states)));
}

Diagram Select(std::vector<int> occupations) {
  return Diagram::from_box(std::make_shared<SelectBox>(std::move(occupations)));
}

// ------------------------------------------------------------------ NumOp

std::vector<BasisTransition> NumOpBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  if (in[0] == 0 || in[0] >= out_caps[0]) return {};
  return {{{in[0]}, static_cast<double>(in[0])}};
}

Diagram NumOp() { return Diagram::from_box(std::make_shared<NumOpBox>()); }

// ------------------------------------------------------------------ dual rail

DualRailBox::DualRailBox(int n, std::vector<InternalState> internal_states)
    : BoxImpl("DualRail", Ty::repeat(WireType::qubit, n), Ty::repeat(WireType::qmode, 2 * n)),
      n_(n),
      states_(std::move(internal_states)) {
  if (n < 1) throw RangeError("DualRail needs at least one qubit");
  validate_states(states_, static_cast<size_t>(n), "DualRail");
}

Json DualRailBox::attrs() const {
  Json j = {{"n", n_}};
  if (!states_.empty()) j["internal_states"] = states_json(states_);
  return j;
}

std::vector<BasisTransition> DualRailBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  std::vector<int> out;
  for (size_t q = 0; q < in.size(); ++q) {
    out.push_back(1 - in[q]);
    out.push_back(in[q]);
  }
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] >= out_caps[i]) return {};
  }
  return {{out, 1.0}};
}

std::vector<int> DualRailBox::forward_bounds(std::span<const int>) const {
  return std::vector<int>(static_cast<size_t>(2 * n_), 1);
}
std::vector<int> DualRailBox::backward_bounds(std::span<const int>) const {
  return std::vector<int>(static_cast<size_t>(n_), 1);
}

Diagram DualRail(int n, std::vector<InternalState> internal_states) {
  return Diagram::from_box(std::make_shared<DualRailBox>(n, std::move(internal_states)));
}

Diagram PhaseShiftDR(Param psi) {
  Diagram body = Id(qmode) * Phase(psi);
  return Diagram::from_box(std::make_shared<CompositeBox>("PhaseShiftDR", body, std::vector<Param>{psi}));
}

Diagram ZMeasurementDR() {
  auto decode = std::make_shared<ClassicalBox>(
      "DualRailDecode", mode.pow(2), bit, Json::object(),
      [](std::span<const int> in) -> std::optional<std::vector<int>> {
        if (in[0] == 1 && in[1] == 0) return std::vector<int>{0};
        if (in[0] == 0 && in[1] == 1) return std::vector<int>{1};
        return std::nullopt;
      },
      [](std::span<const int>) { return std::vector<int>{1}; });
  Diagram body = NumberResolvingMeasurement(2) >> Diagram::from_box(decode);
  return Diagram::from_box(std::make_shared<CompositeBox>("ZMeasurementDR", body));
}

Diagram XMeasurementDR() {
  Diagram body = HadamardBS() >> ZMeasurementDR();
  return Diagram::from_box(std::make_shared<CompositeBox>("XMeasurementDR", body));
}

// ------------------------------------------------------------------ measurement

MeasureBox::MeasureBox(MeasureKind kind, const Ty& quantum, std::string name)
    : BoxImpl(name.empty() ? (kind == MeasureKind::measure ? "Measure" : "Encode") : std::move(name),
              kind == MeasureKind::measure ? quantum : map_ty(quantum, classical_of),
              kind == MeasureKind::measure ? map_ty(quantum, classical_of) : quantum),
      kind_(kind) {
  for (auto t : quantum) {
    if (!is_quantum(t)) throw TypeMismatch("measurement type must be quantum");
  }
}

Json MeasureBox::attrs() const {
  Json ty = Json::array();
  for (auto t : (kind_ == MeasureKind::measure ? dom() : cod())) ty.push_back(to_string(t));
  return {{"quantum", ty}};
}

std::vector<BasisTransition> MeasureBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  for (size_t i = 0; i < in.size(); ++i) {
    if (in[i] >= out_caps[i]) return {};
  }
  return {{std::vector<int>(in.begin(), in.end()), 1.0}};
}

std::vector<int> MeasureBox::forward_bounds(std::span<const int> in) const { return {in.begin(), in.end()}; }
std::vector<int> MeasureBox::backward_bounds(std::span<const int> out) const { return {out.begin(), out.end()}; }

Box MeasureBox::dagger() const {
  const bool renamed = name() != "Measure" && name() != "Encode";
  const Ty quantum = kind_ == MeasureKind::measure ? dom() : cod();
  return std::make_shared<MeasureBox>(kind_ == MeasureKind::measure ? MeasureKind::encode : MeasureKind::measure,
                                      quantum, renamed ? name() + "^dagger" : "");
}

BoxRole MeasureBox::role() const {
  if (kind_ != MeasureKind::measure) return BoxRole::other;
  for (auto t : dom()) {
    if (t != WireType::qmode) return BoxRole::other;
  }
  return BoxRole::readout;
}

Diagram Measure(int n) { return Measure(Ty::repeat(WireType::qubit, n)); }
Diagram Encode(int n) { return Encode(Ty::repeat(WireType::bit, n)); }
Diagram Measure(const Ty& quantum) {
  return Diagram::from_box(std::make_shared<MeasureBox>(MeasureKind::measure, quantum));
}
Diagram Encode(const Ty& classical) {
  return Diagram::from_box(std::make_shared<MeasureBox>(MeasureKind::encode, map_ty(classical, quantum_of)));
}

Diagram NumberResolvingMeasurement(int n) {
  return Diagram::from_box(std::make_shared<MeasureBox>(MeasureKind::measure, Ty::repeat(WireType::qmode, n),
                                                        "NumberResolvingMeasurement"));
}

Diagram ThresholdMeasurement(int n) {
  auto click = std::make_shared<ClassicalBox>(
      "Click", mode, bit, Json::object(),
      [](std::span<const int> in) -> std::optional<std::vector<int>> {
        return std::vector<int>{std::min(in[0], 1)};
      },
      [](std::span<const int>) { return std::vector<int>{1}; });
  Diagram clicks;
  for (int i = 0; i < n; ++i) clicks = clicks * Diagram::from_box(click);
  Diagram body = NumberResolvingMeasurement(n) >> clicks;
  return Diagram::from_box(std::make_shared<CompositeBox>("ThresholdMeasurement", body, std::vector<Param>{},
                                                          Json{{"n", n}}));
}

}  // namespace photonet
