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

#include "photonet/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

Diagram creation_op() { return Channel("a^dagger", Create({1}) * Id(qmode) >> WMerge(2)); }

Diagram annihilation_op() { return Channel("a", W(2) >> Select({1}) * Id(qmode)); }

LatticeGraph LatticeGraph::path(int n) {
  if (n < 1) throw RangeError("path needs at least one node");
  LatticeGraph g;
  for (int i = 0; i < n; ++i) g.nodes.push_back(i);
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

void LatticeGraph::validate() const {
  std::set<int> seen(nodes.begin(), nodes.end());
  if (seen.size() != nodes.size()) throw RangeError("duplicate lattice node");
  if (nodes.empty()) throw RangeError("empty lattice");
  for (auto [a, b] : edges) {
    if (a == b) throw RangeError("self-loop at node " + std::to_string(a));
    if (!seen.contains(a) || !seen.contains(b)) throw RangeError("edge endpoint is not a node");
  }
}

namespace {

Diagram at_site(int k, int n, const Diagram& op) {
  return Id(qmode.pow(k)) * op * Id(qmode.pow(n - k - 1));
}

}  // namespace

DiagramSum bose_hubbard(const LatticeGraph& g, const BHParams& p) {
  g.validate();
  std::vector<int> order = g.nodes;
  std::sort(order.begin(), order.end());
  const int n = static_cast<int>(order.size());
  auto site = [&](int node) { return static_cast<int>(std::lower_bound(order.begin(), order.end(), node) - order.begin()); };
  const Diagram a = annihilation_op();
  const Diagram ad = creation_op();
  std::vector<Diagram> terms;
  if (p.t != 0.0) {
    for (auto [u, v] : g.edges) {
      const int i = site(u), j = site(v);
      terms.push_back((at_site(j, n, a) >> at_site(i, n, ad)) * Complex(-p.t));
      terms.push_back((at_site(i, n, a) >> at_site(j, n, ad)) * Complex(-p.t));
    }
  }
  if (p.U != 0.0) {
    for (int i = 0; i < n; ++i) terms.push_back(at_site(i, n, a >> a >> ad >> ad) * Complex(p.U / 2.0));
  }
  if (p.mu != 0.0) {
    for (int i = 0; i < n; ++i) terms.push_back(at_site(i, n, NumOp()) * Complex(-p.mu));
  }
  if (terms.empty()) terms.push_back(Id(qmode.pow(n)) * Complex(0.0));
  return DiagramSum(std::move(terms));
}

Diagram monomial_layer(const std::vector<int>& powers) {
  std::vector<Diagram> parts;
  for (int p : powers) {
    if (p < 0) throw RangeError("negative monomial power");
    Diagram d = Id(qmode);
    for (int k = 0; k < p; ++k) d = d >> NumOp();
    parts.push_back(d);
  }
  return tensor_all(parts);
}

DiagramSum tensor_identity(const DiagramSum& obs, const Ty& extra) {
  std::vector<Diagram> out;
  for (const auto& t : obs.terms()) out.push_back(t * Id(extra));
  return DiagramSum(std::move(out));
}

DiagramSum expectation(const Diagram& state, const DiagramSum& obs) {
  if (!state.dom().empty()) throw TypeMismatch("expectation needs a state with empty domain");
  if (state.cod() != obs.dom() || obs.dom() != obs.cod()) {
    throw TypeMismatch("observable on " + to_string(obs.dom()) + " does not match state on " + to_string(state.cod()));
  }
  const Diagram bra = state.dagger();
  std::vector<Diagram> out;
  for (const auto& t : obs.terms()) out.push_back(state >> t >> bra);
  return DiagramSum(std::move(out));
}

DiagramSum grad(const DiagramSum& expr, const std::string& sym) {
  if (auto d = differentiate(expr, sym)) return *d;
  if (expr.dom() == expr.cod()) return DiagramSum(Id(expr.dom()) * Complex(0.0));
  throw TypeMismatch("zero derivative of a non-endomorphism expression");
}

Complex evaluate_expression(const DiagramSum& expr, const Bindings& bindings, Backend backend) {
  EvalOptions opts;
  opts.backend = backend;
  Complex total = 0.0;
  for (const auto& t : expr.terms()) total += evaluate(t.substitute(bindings, true), opts).scalar();
  return total;
}

std::vector<std::string> sorted_symbols(const DiagramSum& expr) {
  auto s = expr.free_symbols();
  return {s.begin(), s.end()};
}

std::vector<DescentStep> gradient_descent(const DiagramSum& expr, std::vector<double> x0, double lr, int steps,
                                          Backend backend) {
  const auto syms = sorted_symbols(expr);
  if (x0.size() != syms.size()) {
    throw RangeError("x0 has " + std::to_string(x0.size()) + " entries for " + std::to_string(syms.size()) + " symbols");
  }
  if (steps < 0) throw RangeError("negative step count");
  std::vector<DiagramSum> grads;
  for (const auto& s : syms) grads.push_back(grad(expr, s));
  std::vector<DescentStep> traj;
  std::vector<double> x = std::move(x0);
  for (int step = 0; step <= steps; ++step) {
    Bindings b;
    for (size_t k = 0; k < syms.size(); ++k) b[syms[k]] = x[k];
    DescentStep rec;
    rec.x = x;
    rec.energy = evaluate_expression(expr, b, backend).real();
    for (const auto& g : grads) rec.gradient.push_back(evaluate_expression(g, b, backend).real());
    if (step < steps) {
      for (size_t k = 0; k < x.size(); ++k) x[k] -= lr * rec.gradient[k];
    }
    traj.push_back(std::move(rec));
  }
  return traj;
}

void write_trajectory_csv(std::ostream& out, const std::vector<DescentStep>& traj) {
  const size_t m = traj.empty() ? 0 : traj.front().x.size();
  out << "step,energy";
  for (size_t k = 0; k < m; ++k) out << ",x" << k;
  out << ",grad_norm\n";
  out.precision(17);
  for (size_t s = 0; s < traj.size(); ++s) {
    double norm = 0.0;
    for (double g : traj[s].gradient) norm += g * g;
    out << s << "," << traj[s].energy;
    for (double v : traj[s].x) out << "," << v;
    out << "," << std::sqrt(norm) << "\n";
  }
}

}  // namespace photonet
