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
#include <cstdio>
#include <numeric>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"
#include "photonet/permanent.hpp"

namespace photonet {

namespace {

const char* kind_name(LOKind k) {
  switch (k) {
    case LOKind::Phase:
      return "Phase";
    case LOKind::TBS:
      return "TBS";
    case LOKind::BBS:
      return "BBS";
    case LOKind::BS:
      return "BS";
    case LOKind::MZI:
      return "MZI";
    case LOKind::HBS:
      return "HadamardBS";
  }
  return "?";
}

size_t param_count(LOKind k) {
  switch (k) {
    case LOKind::Phase:
    case LOKind::TBS:
    case LOKind::BBS:
      return 1;
    case LOKind::MZI:
      return 2;
    default:
      return 0;
  }
}

Eigen::MatrixXcd tbs_matrix(double theta) {
  const double c = std::cos(kTwoPi * theta), s = std::sin(kTwoPi * theta);
  Eigen::MatrixXcd u(2, 2);
  u << c, Complex(0, s), Complex(0, s), c;
  return u;
}

Eigen::MatrixXcd hbs_matrix() {
  const double r = std::sqrt(0.5);
  Eigen::MatrixXcd u(2, 2);
  u << r, r, r, -r;
  return u;
}

Eigen::MatrixXcd phase_on_first(double psi) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(2, 2);
  p(0, 0) = std::polar(1.0, kTwoPi * psi);
  return p;
}

void for_each_pattern(int n, std::span<const int> caps, std::vector<int>& t, size_t i,
                      const std::function<void()>& fn) {
  if (i + 1 == caps.size()) {
    if (n < caps[i]) {
      t[i] = n;
      fn();
    }
    return;
  }
  for (int k = std::min(n, caps[i] - 1); k >= 0; --k) {
    t[i] = k;
    for_each_pattern(n - k, caps, t, i + 1, fn);
  }
}

}  // namespace

LOGateBox::LOGateBox(LOKind kind, std::vector<Param> params, bool daggered, bool conjugated)
    : BoxImpl(kind_name(kind), kind == LOKind::Phase ? qmode : qmode.pow(2), kind == LOKind::Phase ? qmode : qmode.pow(2)),
      kind_(kind),
      params_(std::move(params)),
      daggered_(daggered),
      conjugated_(conjugated) {
  if (params_.size() != param_count(kind)) {
    throw RangeError(std::string(kind_name(kind)) + " expects " + std::to_string(param_count(kind)) + " parameters");
  }
}

Json LOGateBox::attrs() const {
  Json j = Json::object();
  if (daggered_) j["dagger"] = true;
  if (conjugated_) j["conjugate"] = true;
  return j;
}

std::optional<Eigen::MatrixXcd> LOGateBox::single_photon_matrix() const {
  Eigen::MatrixXcd u;
  switch (kind_) {
    case LOKind::Phase:
      u = Eigen::MatrixXcd::Constant(1, 1, std::polar(1.0, kTwoPi * params_[0].value()));
      break;
    case LOKind::TBS:
      u = tbs_matrix(params_[0].value());
      break;
    case LOKind::BBS:
      u = tbs_matrix((1.0 + params_[0].value()) / 8.0);
      break;
    case LOKind::BS:
      u = tbs_matrix(1.0 / 8.0);
      break;
    case LOKind::MZI:
      u = hbs_matrix() * phase_on_first(params_[1].value()) * hbs_matrix() * phase_on_first(params_[0].value());
      break;
    case LOKind::HBS:
      u = hbs_matrix();
      break;
  }
  if (conjugated_) u = u.conjugate().eval();
  if (daggered_) u = u.adjoint().eval();
  return u;
}

std::vector<BasisTransition> LOGateBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  const int n = std::accumulate(in.begin(), in.end(), 0);
  if (kind_ == LOKind::Phase) {
    if (in[0] >= out_caps[0]) return {};
    double psi = params_[0].value();
    if (daggered_ != conjugated_) psi = -psi;
    return {{{in[0]}, std::polar(1.0, kTwoPi * psi * in[0])}};
  }
  const Eigen::MatrixXcd u = *single_photon_matrix();
  std::vector<BasisTransition> out;
  std::vector<int> t(out_caps.size(), 0);
  for_each_pattern(n, out_caps, t, 0, [&] {
    Complex a = fock_amplitude(u, in, t);
    if (std::abs(a) > 1e-15) out.push_back({t, a});
  });
  return out;
}

std::vector<int> LOGateBox::forward_bounds(std::span<const int> in) const {
  int s = 0;
  for (int x : in) s = sat_add(s, x);
  return std::vector<int>(in.size(), s);
}

std::vector<int> LOGateBox::backward_bounds(std::span<const int> out) const { return forward_bounds(out); }

Box LOGateBox::dagger() const { return std::make_shared<LOGateBox>(kind_, params_, !daggered_, conjugated_); }
Box LOGateBox::conjugate() const { return std::make_shared<LOGateBox>(kind_, params_, daggered_, !conjugated_); }

Box LOGateBox::substitute(const Bindings& b) const {
  std::vector<Param> ps;
  for (const auto& p : params_) ps.push_back(p.substitute(b));
  return std::make_shared<LOGateBox>(kind_, std::move(ps), daggered_, conjugated_);
}

Diagram LOGateBox::decomposition() const {
  Diagram d;
  switch (kind_) {
    case LOKind::Phase:
      d = Phase(params_[0]);
      break;
    case LOKind::TBS:
      d = HadamardBS() >> (Phase(params_[0]) * Phase(-params_[0])) >> HadamardBS();
      break;
    case LOKind::BBS: {
      Param theta = params_[0] * 0.125 + Param(0.125);
      d = HadamardBS() >> (Phase(theta) * Phase(-theta)) >> HadamardBS();
      break;
    }
    case LOKind::BS:
      d = HadamardBS() >> (Phase(0.125) * Phase(-0.125)) >> HadamardBS();
      break;
    case LOKind::MZI:
      d = (Phase(params_[0]) * Id(qmode)) >> HadamardBS() >> (Phase(params_[1]) * Id(qmode)) >> HadamardBS();
      break;
    case LOKind::HBS:
      d = HadamardBS();
      break;
  }
  if (conjugated_) d = d.conjugate();
  if (daggered_) d = d.dagger();
  return d;
}

std::optional<DiagramSum> LOGateBox::derivative(const std::string& sym) const {
  if (!free_symbols().contains(sym)) return std::nullopt;
  if (kind_ == LOKind::Phase) {
    const double c = params_[0].coefficient(sym);
    const double sign = daggered_ != conjugated_ ? -1.0 : 1.0;
    return DiagramSum((NumOp() >> Diagram::from_box(self())).with_scalar(Complex(0.0, sign * kTwoPi * c)));
  }
  return differentiate(decomposition(), sym);
}

Diagram Phase(Param psi) { return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::Phase, std::vector<Param>{psi})); }
Diagram TBS(Param theta) { return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::TBS, std::vector<Param>{theta})); }
Diagram BBS(Param bias) { return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::BBS, std::vector<Param>{bias})); }
Diagram BS() { return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::BS, std::vector<Param>{})); }
Diagram MZI(Param psi, Param phi) {
  return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::MZI, std::vector<Param>{psi, phi}));
}
Diagram HadamardBS() { return Diagram::from_box(std::make_shared<LOGateBox>(LOKind::HBS, std::vector<Param>{})); }

int ansatz_mzi_count(int width, int layers) {
  int count = 0;
  for (int l = 1; l <= layers; ++l) count += (l % 2 == 1) ? width / 2 : (width - 1) / 2;
  return count;
}

Diagram ansatz(int width, int layers) {
  if (width < 2 || layers < 1) throw RangeError("ansatz needs width >= 2 and layers >= 1");
  const int total = 2 * ansatz_mzi_count(width, layers);
  const int digits = std::max(3, static_cast<int>(std::to_string(std::max(total - 1, 0)).size()));
  int next = 0;
  auto fresh = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "x%0*d", digits, next++);
    return Param::symbol(buf);
  };
  return build_named(qmode.pow(width), [&](Builder& b, const std::vector<Wire>& in) {
    std::vector<Wire> w = in;
    for (int l = 1; l <= layers; ++l) {
      for (int i = (l % 2 == 1) ? 0 : 1; i + 1 < width; i += 2) {
        Param psi = fresh();
        Param phi = fresh();
        auto out = b.apply(MZI(psi, phi), {w[static_cast<size_t>(i)], w[static_cast<size_t>(i) + 1]});
        w[static_cast<size_t>(i)] = out[0];
        w[static_cast<size_t>(i) + 1] = out[1];
      }
    }
    return w;
  });
}

}  // namespace photonet
