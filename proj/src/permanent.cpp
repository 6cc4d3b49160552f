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

#include "photonet/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "photonet/errors.hpp"

namespace photonet {

// ------------------------------------------------------------------ permanents

Complex permanent_naive(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw NotSquare("permanent of a " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  if (n == 0) return 1.0;
  std::vector<int> sigma(static_cast<size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  Complex total = 0.0;
  do {
    Complex p = 1.0;
    for (int i = 0; i < n; ++i) p *= a(i, sigma[static_cast<size_t>(i)]);
    total += p;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

// Ryser's formula, subsets visited in Gray-code order.
Complex permanent_ryser(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw NotSquare("permanent of a " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  if (n == 0) return 1.0;
  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total = 0.0;
  std::vector<char> in(static_cast<size_t>(n), 0);
  int size = 0;
  const unsigned long long count = 1ULL << n;
  for (unsigned long long g = 1; g < count; ++g) {
    const int j = std::countr_zero(g);
    if (in[static_cast<size_t>(j)]) {
      row_sums -= a.col(j);
      --size;
    } else {
      row_sums += a.col(j);
      ++size;
    }
    in[static_cast<size_t>(j)] ^= 1;
    Complex p = row_sums.prod();
    total += (size % 2 == 0) ? p : -p;
  }
  return (n % 2 == 0) ? total : -total;
}

// Glynn's formula with delta_0 fixed to +1 and Gray-code sign flips.
Complex permanent_glynn(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw NotSquare("permanent of a " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  if (n == 0) return 1.0;
  Eigen::VectorXcd sums = a.colwise().sum().transpose();  // sum_i delta_i a_ij
  std::vector<int> delta(static_cast<size_t>(n), 1);
  int sign = 1;
  Complex total = sums.prod();
  const unsigned long long count = 1ULL << (n - 1);
  for (unsigned long long g = 1; g < count; ++g) {
    const int k = std::countr_zero(g) + 1;
    delta[static_cast<size_t>(k)] = -delta[static_cast<size_t>(k)];
    sums += 2.0 * delta[static_cast<size_t>(k)] * a.row(k).transpose();
    sign = -sign;
    Complex p = sums.prod();
    total += sign > 0 ? p : -p;
  }
  return total / static_cast<double>(count);
}

Complex permanent(const Eigen::MatrixXcd& a, PermanentAlgo algo) {
  switch (algo) {
    case PermanentAlgo::naive:
      return permanent_naive(a);
    case PermanentAlgo::ryser:
      return permanent_ryser(a);
    case PermanentAlgo::glynn:
      return permanent_glynn(a);
    case PermanentAlgo::automatic:
      break;
  }
  return a.rows() <= 2 ? permanent_naive(a) : permanent_glynn(a);
}

// ------------------------------------------------------------------ Fock amplitudes

Complex fock_amplitude(const Eigen::MatrixXcd& u, std::span<const int> s, std::span<const int> t, PermanentAlgo algo) {
  const int n = std::accumulate(s.begin(), s.end(), 0);
  if (n != std::accumulate(t.begin(), t.end(), 0)) return 0.0;
  std::vector<int> rows, cols;
  double norm = 0.0;
  for (size_t j = 0; j < t.size(); ++j) {
    for (int r = 0; r < t[j]; ++r) rows.push_back(static_cast<int>(j));
    norm += std::lgamma(t[j] + 1.0);
  }
  for (size_t i = 0; i < s.size(); ++i) {
    for (int r = 0; r < s[i]; ++r) cols.push_back(static_cast<int>(i));
    norm += std::lgamma(s[i] + 1.0);
  }
  Eigen::MatrixXcd sub(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) sub(r, c) = u(rows[static_cast<size_t>(r)], cols[static_cast<size_t>(c)]);
  }
  return permanent(sub, algo) * std::exp(-0.5 * norm);
}

std::vector<Occupation> compositions(int n, int m) {
  std::vector<Occupation> out;
  if (m == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  Occupation cur(static_cast<size_t>(m), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i + 1 == m) {
      cur[static_cast<size_t>(i)] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[static_cast<size_t>(i)] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, n);
  return out;
}

size_t composition_count(int n, int m) {
  if (m == 0) return n == 0 ? 1 : 0;
  // C(n + m - 1, m - 1), built incrementally to stay exact.
  const int k = std::min(n, m - 1);
  const int top = n + m - 1;
  unsigned long long c = 1;
  for (int i = 1; i <= k; ++i) {
    const unsigned long long num = static_cast<unsigned long long>(top - k + i);
    if (c > SIZE_MAX / num) return SIZE_MAX;
    c = c * num / static_cast<unsigned long long>(i);
  }
  return static_cast<size_t>(c);
}

// ------------------------------------------------------------------ interferometers

Eigen::MatrixXcd extract_unitary(const Diagram& d) {
  const Diagram flat = d.flatten();
  for (auto t : flat.dom()) {
    if (t != WireType::qmode) throw BackendIneligible("interferometer boundary must be qmodes");
  }
  if (flat.dom() != flat.cod()) throw BackendIneligible("interferometer must have equal domain and codomain");
  const int m = static_cast<int>(flat.dom().size());
  // Row of each live wire: amplitudes from the input modes.
  std::map<int, Eigen::RowVectorXcd> rows;
  for (int i = 0; i < m; ++i) {
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(m);
    r(i) = 1.0;
    rows[flat.dom_wires()[static_cast<size_t>(i)]] = r;
  }
  for (const auto& node : flat.nodes()) {
    if (node.box->role() != BoxRole::linear_optical) {
      throw BackendIneligible("box '" + node.box->name() + "' is not a linear-optical gate");
    }
    const Eigen::MatrixXcd g = *node.box->single_photon_matrix();
    const int k = static_cast<int>(node.ins.size());
    Eigen::MatrixXcd in(k, m);
    for (int i = 0; i < k; ++i) in.row(i) = rows.at(node.ins[static_cast<size_t>(i)]);
    Eigen::MatrixXcd out = g * in;
    for (int i = 0; i < k; ++i) {
      rows.erase(node.ins[static_cast<size_t>(i)]);
      rows[node.outs[static_cast<size_t>(i)]] = out.row(i);
    }
  }
  Eigen::MatrixXcd u(m, m);
  for (int i = 0; i < m; ++i) u.row(i) = rows.at(flat.cod_wires()[static_cast<size_t>(i)]);
  return u * flat.scalar_product();
}

Complex amplitude(const Interferometer& intf, std::span<const int> t, PermanentAlgo algo) {
  const auto m = static_cast<size_t>(intf.u.rows());
  if (intf.input.size() != m || t.size() != m) throw ShapeMismatch("occupation length differs from mode count");
  const int n_in = std::accumulate(intf.input.begin(), intf.input.end(), 0);
  const int n_out = std::accumulate(t.begin(), t.end(), 0);
  if (n_in != n_out) {
    throw PhotonNumberMismatch("input has " + std::to_string(n_in) + " photons, output " + std::to_string(n_out));
  }
  return fock_amplitude(intf.u, intf.input, t, algo);
}

std::map<Occupation, double> prob_dist(const Interferometer& intf, PermanentAlgo algo) {
  const int m = static_cast<int>(intf.u.rows());
  const int n = std::accumulate(intf.input.begin(), intf.input.end(), 0);
  const size_t count = composition_count(n, m);
  if (count > 1000000) throw TooManyOutcomes(std::to_string(count) + " output patterns");
  std::map<Occupation, double> out;
  for (const auto& t : compositions(n, m)) out[t] = std::norm(amplitude(intf, t, algo));
  return out;
}

// ------------------------------------------------------------------ sparse sweep

namespace {

constexpr double kDrop = 1e-14;

std::vector<int> unbounded(size_t n) { return std::vector<int>(n, kUnbounded); }

struct Sweep {
  std::vector<int> live;  // wire ids, order of the state's occupation vectors
  SparseState state{{Occupation{}, 1.0}};

  std::vector<size_t> positions(std::span<const int> wires) const {
    std::vector<size_t> pos;
    for (int w : wires) {
      auto it = std::find(live.begin(), live.end(), w);
      pos.push_back(static_cast<size_t>(it - live.begin()));
    }
    return pos;
  }

  // Applies a local map on `ins`; outputs are appended as new wires `outs`.
  template <class F>
  void apply(std::span<const int> ins, std::span<const int> outs, F&& local) {
    const auto pos = positions(ins);
    std::vector<char> removed(live.size(), 0);
    for (size_t p : pos) removed[p] = 1;
    std::vector<int> next_live;
    for (size_t i = 0; i < live.size(); ++i) {
      if (!removed[i]) next_live.push_back(live[i]);
    }
    next_live.insert(next_live.end(), outs.begin(), outs.end());
    SparseState next;
    std::vector<int> in_occ(ins.size());
    for (const auto& [occ, amp] : state) {
      for (size_t i = 0; i < pos.size(); ++i) in_occ[i] = occ[pos[i]];
      Occupation rest;
      for (size_t i = 0; i < occ.size(); ++i) {
        if (!removed[i]) rest.push_back(occ[i]);
      }
      for (const auto& tr : local(in_occ)) {
        Occupation o = rest;
        o.insert(o.end(), tr.out.begin(), tr.out.end());
        next[o] += amp * tr.amp;
      }
    }
    for (auto it = next.begin(); it != next.end();) {
      it = std::abs(it->second) < kDrop ? next.erase(it) : std::next(it);
    }
    live = std::move(next_live);
    state = std::move(next);
  }
};

}  // namespace

SparseState permanent_evaluate(const Diagram& d, PermanentAlgo algo) {
  const Diagram flat = d.flatten();
  if (!flat.dom().empty()) throw BackendIneligible("permanent backend needs a closed domain");
  Sweep sw;
  const auto& nodes = flat.nodes();
  size_t i = 0;
  while (i < nodes.size()) {
    const auto& node = nodes[i];
    const BoxRole role = node.box->role();
    if (role == BoxRole::linear_optical) {
      // Maximal block of consecutive gates as one interferometer.
      std::vector<int> block_in;
      std::set<int> seen;
      size_t j = i;
      for (; j < nodes.size() && nodes[j].box->role() == BoxRole::linear_optical; ++j) {
        for (int w : nodes[j].ins) {
          if (seen.insert(w).second) block_in.push_back(w);
        }
        seen.insert(nodes[j].outs.begin(), nodes[j].outs.end());
      }
      const auto m = static_cast<int>(block_in.size());
      std::map<int, Eigen::RowVectorXcd> cur;
      for (int k = 0; k < m; ++k) {
        Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(m);
        r(k) = 1.0;
        cur[block_in[static_cast<size_t>(k)]] = r;
      }
      std::vector<int> slot_wire(block_in);
      for (size_t n = i; n < j; ++n) {
        const Eigen::MatrixXcd g = *nodes[n].box->single_photon_matrix();
        const auto k = nodes[n].ins.size();
        Eigen::MatrixXcd in(static_cast<long>(k), m);
        for (size_t r = 0; r < k; ++r) in.row(static_cast<long>(r)) = cur.at(nodes[n].ins[r]);
        Eigen::MatrixXcd out = g * in;
        for (size_t r = 0; r < k; ++r) {
          cur.erase(nodes[n].ins[r]);
          cur[nodes[n].outs[r]] = out.row(static_cast<long>(r));
          auto it = std::find(slot_wire.begin(), slot_wire.end(), nodes[n].ins[r]);
          *it = nodes[n].outs[r];
        }
      }
      Eigen::MatrixXcd u(m, m);
      for (int k = 0; k < m; ++k) u.row(k) = cur.at(slot_wire[static_cast<size_t>(k)]);
      std::map<Occupation, std::vector<BasisTransition>> cache;
      sw.apply(block_in, slot_wire, [&](const std::vector<int>& s) -> const std::vector<BasisTransition>& {
        auto it = cache.find(s);
        if (it != cache.end()) return it->second;
        std::vector<BasisTransition> trs;
        const int n = std::accumulate(s.begin(), s.end(), 0);
        for (const auto& t : compositions(n, m)) {
          Complex a = fock_amplitude(u, s, t, algo);
          if (std::abs(a) > kDrop) trs.push_back({t, a});
        }
        return cache.emplace(s, std::move(trs)).first->second;
      });
      i = j;
      continue;
    }
    switch (role) {
      case BoxRole::source:
      case BoxRole::effect:
      case BoxRole::fock_local: {
        const auto caps = unbounded(node.outs.size());
        sw.apply(node.ins, node.outs, [&](const std::vector<int>& in) { return node.box->transitions(in, caps); });
        break;
      }
      case BoxRole::readout: {
        // Number-resolving readout: relabel the wires, the values are kept.
        for (size_t k = 0; k < node.ins.size(); ++k) {
          auto it = std::find(sw.live.begin(), sw.live.end(), node.ins[k]);
          *it = node.outs[k];
        }
        for (size_t n = i + 1; n < nodes.size(); ++n) {
          for (int w : nodes[n].ins) {
            if (std::find(node.outs.begin(), node.outs.end(), w) != node.outs.end()) {
              throw BackendIneligible("readout of '" + node.box->name() + "' feeds box '" + nodes[n].box->name() + "'");
            }
          }
        }
        break;
      }
      default:
        throw BackendIneligible("box '" + node.box->name() + "' is not supported by the permanent backend");
    }
    ++i;
  }
  const Complex k = flat.scalar_product();
  const auto pos = sw.positions(flat.cod_wires());
  SparseState out;
  for (const auto& [occ, amp] : sw.state) {
    Occupation o;
    for (size_t p : pos) o.push_back(occ[p]);
    out[o] += k * amp;
  }
  return out;
}

double expectation_permanent(const Diagram& state_prep, const DiagramSum& observable, PermanentAlgo algo) {
  const SparseState psi = permanent_evaluate(state_prep, algo);
  Complex total = 0.0;
  for (const auto& term : observable.terms()) {
    const SparseState phi = permanent_evaluate(state_prep >> term, algo);
    for (const auto& [occ, a] : phi) {
      auto it = psi.find(occ);
      if (it != psi.end()) total += std::conj(it->second) * a;
    }
  }
  return total.real();
}

}  // namespace photonet
