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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <functional>
#include <limits>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

namespace {

std::atomic<int> g_cap_override{0};

constexpr std::uint64_t kCostMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kCostMax / b) return kCostMax;
  return a * b;
}

std::uint64_t sat_add64(std::uint64_t a, std::uint64_t b) { return a > kCostMax - b ? kCostMax : a + b; }

}  // namespace

int default_cap() {
  if (int c = g_cap_override.load(); c > 0) return c;
  if (const char* env = std::getenv("PHOTONET_CAP")) {
    const int c = std::atoi(env);
    if (c >= 1) return c;
  }
  return 2;
}

void set_default_cap(int cap) { g_cap_override.store(cap); }

// ------------------------------------------------------------------ dimensions

namespace {

bool conserves_number(const BoxImpl& b) {
  switch (b.role()) {
    case BoxRole::linear_optical:
    case BoxRole::fock_local:
    case BoxRole::readout:
      return true;
    default:
      break;
  }
  if (dynamic_cast<const MeasureBox*>(&b)) return true;
  return dynamic_cast<const ClassicalBox*>(&b) && b.name() == "Add";
}

}  // namespace

WireDims infer_dims(const Diagram& d, std::span<const int> dom_caps, std::span<const int> cod_caps) {
  const auto& types = d.wire_types();
  const size_t nw = types.size();
  const int fallback = default_cap();
  if (!dom_caps.empty() && dom_caps.size() != d.dom_wires().size()) {
    throw ShapeMismatch("got " + std::to_string(dom_caps.size()) + " domain caps for " +
                        std::to_string(d.dom_wires().size()) + " input wires");
  }
  if (!cod_caps.empty() && cod_caps.size() != d.cod_wires().size()) {
    throw ShapeMismatch("got " + std::to_string(cod_caps.size()) + " codomain caps for " +
                        std::to_string(d.cod_wires().size()) + " output wires");
  }
  std::vector<int> fwd(nw, kUnbounded), bwd(nw, kUnbounded);
  auto clamp = [&](int w, int b) { return is_two_level(types[static_cast<size_t>(w)]) ? std::min(b, 1) : b; };

  for (size_t i = 0; i < d.dom_wires().size(); ++i) {
    const int w = d.dom_wires()[i];
    fwd[static_cast<size_t>(w)] = clamp(w, dom_caps.empty() ? fallback - 1 : dom_caps[i] - 1);
  }
  for (const auto& node : d.nodes()) {
    std::vector<int> in;
    for (int w : node.ins) in.push_back(fwd[static_cast<size_t>(w)]);
    const auto out = node.box->forward_bounds(in);
    for (size_t k = 0; k < node.outs.size(); ++k) fwd[static_cast<size_t>(node.outs[k])] = clamp(node.outs[k], out[k]);
  }

  // Photon budget: fock wires joined by number-conserving boxes form a
  // component whose total never exceeds what enters it, so every wire in it
  // is bounded by that total. Then one more forward pass with the clamp.
  std::vector<int> parent(nw);
  for (size_t w = 0; w < nw; ++w) parent[w] = static_cast<int>(w);
  std::function<int(int)> find = [&](int w) {
    while (parent[static_cast<size_t>(w)] != w) w = parent[static_cast<size_t>(w)] = parent[static_cast<size_t>(parent[static_cast<size_t>(w)])];
    return w;
  };
  auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };
  auto fock = [&](int w) { return is_fock(types[static_cast<size_t>(w)]); };
  std::vector<char> entry(nw, 1);
  for (const auto& node : d.nodes()) {
    if (conserves_number(*node.box)) {
      int first = -1;
      for (int w : node.ins) {
        if (fock(w)) first = first < 0 ? w : (unite(w, first), first);
      }
      for (int w : node.outs) {
        if (!fock(w)) continue;
        if (first < 0) continue;
        unite(w, first);
        entry[static_cast<size_t>(w)] = 0;
      }
    } else if (dynamic_cast<const CopyBox*>(node.box.get()) && !node.ins.empty() && !node.outs.empty() &&
               fock(node.ins[0])) {
      // Copy's first output carries exactly the first input's value.
      unite(node.outs[0], node.ins[0]);
      entry[static_cast<size_t>(node.outs[0])] = 0;
    }
  }
  std::vector<int> budget(nw, 0);
  for (int w : d.dom_wires()) {
    if (fock(w)) budget[static_cast<size_t>(find(w))] = sat_add(budget[static_cast<size_t>(find(w))], fwd[static_cast<size_t>(w)]);
  }
  for (const auto& node : d.nodes()) {
    std::set<int> comps;
    for (int w : node.outs) {
      if (fock(w) && entry[static_cast<size_t>(w)]) comps.insert(find(w));
    }
    if (comps.empty()) continue;
    std::vector<int> in;
    for (int w : node.ins) in.push_back(fwd[static_cast<size_t>(w)]);
    const int total = node.box->photon_budget(in);
    for (int c : comps) budget[static_cast<size_t>(c)] = sat_add(budget[static_cast<size_t>(c)], total);
  }
  auto cap_of = [&](int w) { return fock(w) ? budget[static_cast<size_t>(find(w))] : kUnbounded; };
  for (int w : d.dom_wires()) fwd[static_cast<size_t>(w)] = std::min(fwd[static_cast<size_t>(w)], cap_of(w));
  for (const auto& node : d.nodes()) {
    std::vector<int> in;
    for (int w : node.ins) in.push_back(fwd[static_cast<size_t>(w)]);
    const auto out = node.box->forward_bounds(in);
    for (size_t k = 0; k < node.outs.size(); ++k) {
      const int w = node.outs[k];
      fwd[static_cast<size_t>(w)] = std::min(clamp(w, out[k]), cap_of(w));
    }
  }

  for (size_t i = 0; i < d.cod_wires().size(); ++i) {
    const int w = d.cod_wires()[i];
    bwd[static_cast<size_t>(w)] = clamp(w, cod_caps.empty() ? kUnbounded : cod_caps[i] - 1);
  }
  for (auto it = d.nodes().rbegin(); it != d.nodes().rend(); ++it) {
    std::vector<int> out;
    for (int w : it->outs) out.push_back(bwd[static_cast<size_t>(w)]);
    const auto in = it->box->backward_bounds(out);
    for (size_t k = 0; k < it->ins.size(); ++k) {
      auto& b = bwd[static_cast<size_t>(it->ins[k])];
      b = std::min(b, clamp(it->ins[k], in[k]));
    }
  }

  WireDims dims(nw, 1);
  for (size_t w = 0; w < nw; ++w) {
    const int b = std::min(fwd[w], bwd[w]);
    dims[w] = b >= kUnbounded ? fallback : b + 1;
    if (is_two_level(types[w])) dims[w] = std::min(dims[w], 2);
  }
  // Requested boundary shapes win.
  for (size_t i = 0; i < dom_caps.size(); ++i) dims[static_cast<size_t>(d.dom_wires()[i])] = dom_caps[i];
  for (size_t i = 0; i < cod_caps.size(); ++i) {
    const int w = d.cod_wires()[i];
    if (std::find(d.dom_wires().begin(), d.dom_wires().end(), w) == d.dom_wires().end()) {
      dims[static_cast<size_t>(w)] = cod_caps[i];
    }
  }
  return dims;
}

// ------------------------------------------------------------------ network

TensorNetwork to_tensor_network(const Diagram& d, const WireDims& dims) {
  if (auto syms = d.free_symbols(); !syms.empty()) {
    throw SymbolicDiagram("cannot evaluate with free symbol '" + *syms.begin() + "'");
  }
  TensorNetwork tn;
  tn.label_dims = dims;
  tn.scalar = d.scalar_product();
  for (const auto& node : d.nodes()) {
    std::vector<int> in_caps, out_caps;
    for (int w : node.ins) in_caps.push_back(dims[static_cast<size_t>(w)]);
    for (int w : node.outs) out_caps.push_back(dims[static_cast<size_t>(w)]);
    Tensor t = node.box->dense(in_caps, out_caps);
    std::vector<int> labels = node.ins;
    labels.insert(labels.end(), node.outs.begin(), node.outs.end());
    tn.nodes.push_back({node.box->name(), std::move(t), std::move(labels)});
  }
  tn.open = d.dom_wires();
  for (int w : d.cod_wires()) {
    if (std::find(d.dom_wires().begin(), d.dom_wires().end(), w) == d.dom_wires().end()) {
      tn.open.push_back(w);
      continue;
    }
    // Straight-through wire: identity between the wire and a fresh label.
    const int fresh = static_cast<int>(tn.label_dims.size());
    const int dim = dims[static_cast<size_t>(w)];
    tn.label_dims.push_back(dim);
    tn.nodes.push_back({"id", Tensor::identity(dim), {w, fresh}});
    tn.open.push_back(fresh);
  }
  return tn;
}

// ------------------------------------------------------------------ planning

namespace {

std::vector<int> merged_labels(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t size_of(const std::vector<int>& labels, const std::vector<int>& dims) {
  std::uint64_t s = 1;
  for (int l : labels) s = sat_mul64(s, static_cast<std::uint64_t>(dims[static_cast<size_t>(l)]));
  return s;
}

std::uint64_t merge_cost(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& dims) {
  std::vector<int> u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return size_of(u, dims);
}

std::vector<int> shape_of(const std::vector<int>& labels, const std::vector<int>& dims) {
  std::vector<int> s;
  for (int l : labels) s.push_back(dims[static_cast<size_t>(l)]);
  return s;
}

std::vector<std::vector<int>> sorted_labels(const TensorNetwork& tn) {
  std::vector<std::vector<int>> out;
  for (const auto& n : tn.nodes) {
    auto l = n.labels;
    std::sort(l.begin(), l.end());
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

ContractionPath plan_greedy(const TensorNetwork& tn) {
  ContractionPath path;
  std::map<int, std::vector<int>> live;
  auto labels = sorted_labels(tn);
  for (size_t i = 0; i < labels.size(); ++i) live[static_cast<int>(i)] = labels[i];
  int next = static_cast<int>(labels.size());
  while (live.size() > 1) {
    bool have = false;
    long double best_delta = 0;
    std::uint64_t best_size = 0;
    int ba = -1, bb = -1;
    std::vector<int> best_labels;
    for (auto ia = live.begin(); ia != live.end(); ++ia) {
      for (auto ib = std::next(ia); ib != live.end(); ++ib) {
        auto m = merged_labels(ia->second, ib->second);
        const std::uint64_t rs = size_of(m, tn.label_dims);
        const long double delta = static_cast<long double>(rs) - static_cast<long double>(size_of(ia->second, tn.label_dims)) -
                                  static_cast<long double>(size_of(ib->second, tn.label_dims));
        if (!have || delta < best_delta || (delta == best_delta && rs < best_size)) {
          have = true;
          best_delta = delta;
          best_size = rs;
          ba = ia->first;
          bb = ib->first;
          best_labels = std::move(m);
        }
      }
    }
    const std::uint64_t cost = merge_cost(live[ba], live[bb], tn.label_dims);
    path.steps.push_back({ba, bb, cost, shape_of(best_labels, tn.label_dims)});
    path.total_cost = sat_add64(path.total_cost, cost);
    live.erase(ba);
    live.erase(bb);
    live[next++] = std::move(best_labels);
  }
  return path;
}

ContractionPath plan_random_greedy(const TensorNetwork& tn, int trials, std::uint64_t seed) {
  ContractionPath best = plan_greedy(tn);
  // Cheap plans are not worth the search.
  if (best.total_cost < (std::uint64_t{1} << 22)) return best;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto labels = sorted_labels(tn);
  for (int t = 0; t < trials; ++t) {
    const double alpha = 0.5 + unit(rng);
    const double temp = 0.01 + unit(rng);
    ContractionPath path;
    std::map<int, std::vector<int>> live;
    for (size_t i = 0; i < labels.size(); ++i) live[static_cast<int>(i)] = labels[i];
    int next = static_cast<int>(labels.size());
    while (live.size() > 1) {
      bool have = false, connected = false;
      double best_key = 0.0;
      int ba = -1, bb = -1;
      std::vector<int> best_labels;
      for (auto ia = live.begin(); ia != live.end(); ++ia) {
        for (auto ib = std::next(ia); ib != live.end(); ++ib) {
          auto m = merged_labels(ia->second, ib->second);
          const bool shares = m.size() < ia->second.size() + ib->second.size();
          if (connected && !shares) continue;
          const double cost = static_cast<double>(size_of(m, tn.label_dims)) -
                              alpha * (static_cast<double>(size_of(ia->second, tn.label_dims)) +
                                       static_cast<double>(size_of(ib->second, tn.label_dims)));
          // Gumbel-perturbed choice.
          const double g = -std::log(-std::log(std::max(unit(rng), 1e-300)));
          const double key = cost - temp * g * std::max(1.0, std::abs(cost));
          if (!have || (shares && !connected) || key < best_key) {
            have = true;
            connected = connected || shares;
            best_key = key;
            ba = ia->first;
            bb = ib->first;
            best_labels = std::move(m);
          }
        }
      }
      const std::uint64_t cost = merge_cost(live[ba], live[bb], tn.label_dims);
      path.steps.push_back({ba, bb, cost, shape_of(best_labels, tn.label_dims)});
      path.total_cost = sat_add64(path.total_cost, cost);
      if (path.total_cost >= best.total_cost) break;
      live.erase(ba);
      live.erase(bb);
      live[next++] = std::move(best_labels);
    }
    if (live.size() <= 1 && path.total_cost < best.total_cost) best = std::move(path);
  }
  return best;
}

ContractionPath plan_optimal(const TensorNetwork& tn, int max_nodes) {
  const int n = static_cast<int>(tn.nodes.size());
  if (n > max_nodes) {
    throw TooLarge("optimal planning is limited to " + std::to_string(max_nodes) + " nodes, network has " +
                   std::to_string(n));
  }
  ContractionPath path;
  if (n <= 1) return path;
  const auto labels = sorted_labels(tn);
  const size_t full = (size_t{1} << n) - 1;
  std::vector<std::vector<int>> free(full + 1);
  for (size_t s = 1; s <= full; ++s) {
    const int low = std::countr_zero(s);
    const size_t rest = s & (s - 1);
    free[s] = rest ? merged_labels(free[rest], labels[static_cast<size_t>(low)]) : labels[static_cast<size_t>(low)];
  }
  std::vector<std::uint64_t> best(full + 1, kCostMax);
  std::vector<size_t> split(full + 1, 0);
  for (int i = 0; i < n; ++i) best[size_t{1} << i] = 0;
  for (size_t s = 1; s <= full; ++s) {
    if ((s & (s - 1)) == 0) continue;
    const size_t low = s & (~s + 1);
    // Sub-masks containing the lowest node, excluding s itself.
    for (size_t a = (s - 1) & s; a; a = (a - 1) & s) {
      if (!(a & low)) continue;
      const size_t b = s ^ a;
      if (best[a] == kCostMax || best[b] == kCostMax) continue;
      const std::uint64_t c = sat_add64(sat_add64(best[a], best[b]), merge_cost(free[a], free[b], tn.label_dims));
      if (c < best[s]) {
        best[s] = c;
        split[s] = a;
      }
    }
  }
  int next = n;
  std::function<int(size_t)> emit = [&](size_t s) -> int {
    if ((s & (s - 1)) == 0) return std::countr_zero(s);
    const size_t a = split[s];
    const int ia = emit(a);
    const int ib = emit(s ^ a);
    const std::uint64_t cost = merge_cost(free[a], free[s ^ a], tn.label_dims);
    path.steps.push_back({std::min(ia, ib), std::max(ia, ib), cost, shape_of(free[s], tn.label_dims)});
    path.total_cost = sat_add64(path.total_cost, cost);
    return next++;
  };
  emit(full);
  return path;
}

// ------------------------------------------------------------------ contraction

Tensor contract(const TensorNetwork& tn, const ContractionPath& path, std::uint64_t* madds) {
  std::map<int, std::pair<Tensor, std::vector<int>>> live;
  for (size_t i = 0; i < tn.nodes.size(); ++i) live[static_cast<int>(i)] = {tn.nodes[i].tensor, tn.nodes[i].labels};
  int next = static_cast<int>(tn.nodes.size());
  for (const auto& step : path.steps) {
    auto ia = live.find(step.a), ib = live.find(step.b);
    if (ia == live.end() || ib == live.end() || step.a == step.b) throw ShapeMismatch("contraction path refers to a consumed node");
    std::vector<int> labels;
    Tensor t = contract_pair(ia->second.first, ia->second.second, ib->second.first, ib->second.second, labels, madds);
    live.erase(ia);
    live.erase(live.find(step.b));
    live[next++] = {std::move(t), std::move(labels)};
  }
  Tensor result;
  std::vector<int> labels;
  if (live.size() > 1) throw ShapeMismatch("contraction path does not cover the network");
  if (live.size() == 1) {
    result = std::move(live.begin()->second.first);
    labels = std::move(live.begin()->second.second);
  }
  if (labels.size() != tn.open.size()) throw ShapeMismatch("contraction left unexpected open indices");
  std::vector<int> perm;
  for (int l : tn.open) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ShapeMismatch("open label missing from the result");
    perm.push_back(static_cast<int>(it - labels.begin()));
  }
  Tensor out = result.permuted(perm);
  out *= tn.scalar;
  return out;
}

// ------------------------------------------------------------------ drivers

Compiled compile(const Diagram& d, const CompileOptions& opts) {
  const Diagram flat = d.flatten();
  const std::vector<int> none;
  const WireDims dims = infer_dims(flat, opts.dom_caps ? std::span<const int>(*opts.dom_caps) : std::span<const int>(none),
                                   opts.cod_caps ? std::span<const int>(*opts.cod_caps) : std::span<const int>(none));
  Compiled c;
  c.network = to_tensor_network(flat, dims);
  const bool optimal = opts.planner == Planner::optimal ||
                       (opts.planner == Planner::automatic && c.network.nodes.size() <= 12);
  if (optimal) {
    c.path = plan_optimal(c.network);
  } else if (opts.planner == Planner::greedy) {
    c.path = plan_greedy(c.network);
  } else {
    c.path = plan_random_greedy(c.network);
  }
  c.tensor = contract(c.network, c.path, &c.madds);
  for (int w : flat.dom_wires()) c.dom_caps.push_back(dims[static_cast<size_t>(w)]);
  for (int w : flat.cod_wires()) c.cod_caps.push_back(dims[static_cast<size_t>(w)]);
  return c;
}

Tensor evaluate_dense(const Diagram& d, std::span<const int> dom_caps, std::span<const int> cod_caps) {
  CompileOptions opts;
  opts.dom_caps = std::vector<int>(dom_caps.begin(), dom_caps.end());
  opts.cod_caps = std::vector<int>(cod_caps.begin(), cod_caps.end());
  return compile(d, opts).tensor;
}

Json plan_report(const Compiled& c) {
  Json nodes = Json::array();
  for (size_t i = 0; i < c.network.nodes.size(); ++i) {
    const auto& n = c.network.nodes[i];
    nodes.push_back({{"id", i}, {"name", n.name}, {"shape", n.tensor.shape()}, {"labels", n.labels}});
  }
  Json steps = Json::array();
  for (const auto& s : c.path.steps) steps.push_back({{"merge", {s.a, s.b}}, {"cost", s.cost}, {"shape", s.shape}});
  return {{"nodes", nodes},
          {"open", c.network.open},
          {"steps", steps},
          {"estimated_madds", c.path.total_cost},
          {"measured_madds", c.madds},
          {"dom_caps", c.dom_caps},
          {"cod_caps", c.cod_caps}};
}

}  // namespace photonet
