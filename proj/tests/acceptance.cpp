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

// One line per acceptance criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "photonet/channels.hpp"
#include "photonet/compile_tn.hpp"
#include "photonet/experiments.hpp"
#include "photonet/generators.hpp"
#include "photonet/permanent.hpp"
#include "photonet/streams.hpp"
#include "photonet/vqe.hpp"

using namespace photonet;

namespace {

EvalOptions on(Backend b) {
  EvalOptions o;
  o.backend = b;
  return o;
}

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double at(const std::map<std::vector<int>, double>& p, std::vector<int> k) {
  auto it = p.find(k);
  return it == p.end() ? 0.0 : it->second;
}

double diff(const Tensor& t, const std::vector<Complex>& want) {
  if (t.size() != want.size()) return 1e300;
  double d = 0.0;
  for (size_t i = 0; i < want.size(); ++i) d = std::max(d, std::abs(t[i] - want[i]));
  return d;
}

Outcome hom_dip() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (Backend b : {Backend::tn, Backend::permanent}) {
    const auto p = evaluate(hom_diagram(), on(b)).prob_dist();
    worst = std::max({worst, std::abs(at(p, {1, 1})), std::abs(at(p, {2, 0}) - 0.5), std::abs(at(p, {0, 2}) - 0.5)});
  }
  const double dt = seconds(t0);
  return {worst <= 1e-9 && dt < 1.0, "max deviation " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Outcome hom_distinguishable_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  auto coincidence = [](const InternalState& s2) {
    return at(evaluate(inflate(hom_distinguishable({1.0, 0.0}, s2), 2)).prob_dist(), {1, 1});
  };
  const double p = coincidence({std::sqrt(0.9), std::sqrt(0.1)});
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t = i * (oracle::kPi / 2) / 9;
    const double x = std::cos(t);
    worst = std::max(worst, std::abs(coincidence({std::cos(t), std::sin(t)}) - (0.5 - 0.5 * x * x)));
  }
  const double dt = seconds(t0);
  return {std::abs(p - 0.05) <= 1e-6 && worst <= 1e-6 && dt < 10.0,
          "P(1,1) = " + fmt(p) + ", sweep deviation " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Outcome hom_loss() {
  const double p = at(evaluate(hom_lossy(0.8)).prob_dist(), {1});
  return {std::abs(p - 0.2) <= 1e-9, "P(1) = " + fmt(p)};
}

Outcome teleport_zx_identity() {
  const double d = diff(evaluate(teleport_zx()).tensor(), oracle::superop({oracle::Mat::Identity(2, 2)}));
  return {d <= 1e-9, "max deviation " + fmt(d)};
}

Outcome teleport_fusion_identity() {
  // Both sides read as channels: the reference scalar enters as |sqrt 0.5|^2.
  EvalOptions doubled;
  doubled.force_doubled = true;
  const Tensor got = evaluate(teleport_fusion()).tensor();
  const double d1 = got.max_abs_diff(evaluate(Id(qubit) * Scalar(std::sqrt(0.5)), doubled).tensor());
  const double d2 = diff(got, oracle::superop({std::sqrt(0.5) * oracle::Mat::Identity(2, 2)}));
  return {std::max(d1, d2) <= 1e-9, "max deviation " + fmt(std::max(d1, d2))};
}

Outcome fusion_sweep() {
  const auto pts = fusion_fidelity_sweep(30);
  bool mono = true, psucc = true;
  const FusionPoint* one = nullptr;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i].overlap - 1.0) < 1e-12) one = &pts[i];
    for (size_t j = 0; j < pts.size(); ++j) {
      if (pts[j].overlap > pts[i].overlap && pts[j].fidelity < pts[i].fidelity - 1e-9) mono = false;
    }
    if (!(pts[i].p_succ > 0.0 && pts[i].p_succ <= 1.0)) psucc = false;
  }
  const bool f1 = one != nullptr && std::abs(one->fidelity - 1.0) <= 1e-6;
  return {f1 && mono && psucc && pts.size() == 30,
          "F(1) = " + (one ? fmt(one->fidelity) : std::string("missing")) + ", monotone " + (mono ? "yes" : "no") +
              ", p_succ in (0,1] " + (psucc ? "yes" : "no")};
}

Outcome permanents() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 8;
    const auto a = oracle::random_complex(n, n, rng);
    const Complex ref = n <= 7 ? oracle::permanent(a) : permanent_naive(a);
    const double scale = std::max(1.0, std::abs(ref));
    for (Complex v : {permanent_naive(a), permanent_ryser(a), permanent_glynn(a)}) {
      worst = std::max(worst, std::abs(v - ref) / scale);
    }
  }
  double norm_dev = 0.0;
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto u = oracle::haar_unitary(m, rng);
      const auto inputs = compositions(n, m);
      for (size_t s = 0; s < inputs.size(); s += 3) {
        double total = 0.0;
        for (const auto& t : compositions(n, m)) total += std::norm(fock_amplitude(u, inputs[s], t));
        norm_dev = std::max(norm_dev, std::abs(total - 1.0));
      }
    }
  }
  return {worst <= 1e-9 && norm_dev <= 1e-9, "max relative error " + fmt(worst) + ", norm deviation " + fmt(norm_dev)};
}

// Random brick of BS / TBS / MZI / Phase gates with its single-photon matrix.
std::pair<Diagram, oracle::Mat> random_lo_circuit(int m, int depth, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Diagram d = Id(qmode.pow(m));
  oracle::Mat mat = oracle::Mat::Identity(m, m);
  for (int l = 0; l < depth; ++l) {
    for (int i = l % 2; i + 1 < m; i += 2) {
      const int kind = static_cast<int>(rng() % 3);
      Diagram g;
      oracle::Mat g2;
      if (kind == 0) {
        g = BS();
        g2 = oracle::tbs(0.125);
      } else if (kind == 1) {
        const double th = u(rng);
        g = TBS(th);
        g2 = oracle::tbs(th);
      } else {
        const double a = u(rng), b = u(rng);
        g = MZI(a, b);
        g2 = oracle::mzi(a, b);
      }
      d = d >> Id(qmode.pow(i)) * g * Id(qmode.pow(m - i - 2));
      oracle::Mat e = oracle::Mat::Identity(m, m);
      e.block(i, i, 2, 2) = g2;
      mat = e * mat;
    }
    const int k = static_cast<int>(rng() % static_cast<unsigned>(m));
    const double ph = u(rng);
    d = d >> Id(qmode.pow(k)) * Phase(ph) * Id(qmode.pow(m - k - 1));
    oracle::Mat e = oracle::Mat::Identity(m, m);
    e(k, k) = oracle::cis_turns(ph);
    mat = e * mat;
  }
  return {d, mat};
}

Outcome cross_backend() {
  std::mt19937_64 rng(808);
  double worst = 0.0;
  for (int c = 0; c < 20; ++c) {
    const int m = 2 + c % 4;
    const int n = 1 + c % 4;
    const int depth = 1 + (c / 4) % 4;
    auto [lo, mat] = random_lo_circuit(m, depth, rng);
    std::vector<int> occ(static_cast<size_t>(m), 0);
    for (int k = 0; k < n; ++k) ++occ[static_cast<size_t>(k % m)];
    const Diagram d = Create(occ) >> lo;
    const auto tn = evaluate(d, on(Backend::tn)).prob_dist();
    const auto pe = evaluate(d, on(Backend::permanent)).prob_dist();
    for (const auto& [t, amp] : oracle::fock_output(mat, occ)) {
      const double want = std::norm(amp);
      worst = std::max({worst, std::abs(at(tn, t) - want), std::abs(at(pe, t) - want)});
    }
    for (const auto& [t, p] : tn) worst = std::max(worst, std::abs(p - at(pe, t)));
  }
  return {worst <= 1e-8, "max difference " + fmt(worst)};
}

Outcome qubit_noise() {
  const std::vector<Diagram> states = {
      Ket({0}), Ket({1}), Ket({0}) >> H(), Ket({1}) >> H(), Ket({0}) >> H() >> Z(1, 1, 0.25),
      Ket({0}) >> H() >> Z(1, 1, 0.75)};
  oracle::Mat x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  EvalOptions doubled;
  doubled.force_doubled = true;
  double worst = 0.0;
  for (double p : {0.0, 0.3, 1.0}) {
    for (const auto& s : states) {
      const oracle::Mat rho = evaluate(s, doubled).density_matrix();
      const oracle::Mat bf = evaluate(s >> BitFlip(p)).density_matrix();
      const oracle::Mat dp = evaluate(s >> Dephasing(p)).density_matrix();
      worst = std::max(worst, oracle::max_abs(bf - ((1 - p) * rho + p * x * rho * x)));
      worst = std::max(worst, oracle::max_abs(dp - ((1 - p) * rho + p * z * rho * z)));
    }
  }
  return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

Outcome planner() {
  std::mt19937_64 rng(5050);
  bool cost_ok = true;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const TensorNetwork tn = oracle::random_network(2 + k % 9, rng);
    const auto g = plan_greedy(tn), o = plan_optimal(tn);
    cost_ok = cost_ok && o.total_cost <= g.total_cost;
    const Tensor a = contract(tn, g), b = contract(tn, o);
    double scale = 1.0;
    for (size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i]));
    worst = std::max(worst, a.max_abs_diff(b) / scale);
  }
  return {cost_ok && worst <= 1e-12, std::string("optimal <= greedy ") + (cost_ok ? "yes" : "no") +
                                         ", max relative difference " + fmt(worst)};
}

Outcome vqe() {
  const auto t0 = std::chrono::steady_clock::now();
  const DiagramSum e = bose_hubbard_energy();
  const auto syms = sorted_symbols(e);
  auto bind = [&](const std::vector<double>& x) {
    Bindings b;
    for (size_t k = 0; k < syms.size(); ++k) b[syms[k]] = x[k];
    return b;
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto point = [&] {
    std::vector<double> x(syms.size());
    for (auto& v : x) v = u(rng);
    return x;
  };
  const auto traj = gradient_descent(e, point(), 0.001, 30, Backend::permanent);
  const bool down = traj.back().energy < traj.front().energy;
  double worst = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const auto x = point();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < syms.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (evaluate_expression(e, bind(xp), Backend::permanent).real() -
                         evaluate_expression(e, bind(xm), Backend::permanent).real()) /
                        (2 * h);
      const double g = evaluate_expression(grad(e, syms[i]), bind(x), Backend::permanent).real();
      num += (g - fd) * (g - fd);
      den += fd * fd;
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  const double dt = seconds(t0);
  return {down && worst <= 1e-5 && dt < 120.0, "E " + fmt(traj.front().energy) + " -> " + fmt(traj.back().energy) +
                                                   ", gradient error " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Outcome bench() {
  BenchConfig cfg;
  cfg.photons = {2, 3, 4, 5, 6};
  cfg.depths = {DepthRule::constant, DepthRule::log, DepthRule::linear};
  cfg.limits.timeout_s = 60.0;
  const auto recs = run_bench(cfg);
  std::ostringstream csv;
  write_bench_csv(csv, recs);
  const std::string text = csv.str();
  const auto lines = std::count(text.begin(), text.end(), '\n');
  bool complete = recs.size() == 30 && lines == 31;
  double worst = 0.0;
  int both = 0;
  for (size_t i = 0; i + 1 < recs.size(); i += 2) {
    const auto& a = recs[i];
    const auto& b = recs[i + 1];
    complete = complete && a.circuit_id == b.circuit_id && !a.status.empty() && !b.status.empty();
    if (a.status == "ok" && b.status == "ok") {
      ++both;
      worst = std::max(worst, std::abs(a.value - b.value) / std::max(1.0, std::abs(a.value)));
    }
  }
  return {complete && worst <= 1e-6, std::to_string(recs.size()) + " records, " + std::to_string(both) +
                                         " pairs finished, max relative difference " + fmt(worst)};
}

Outcome streams() {
  const std::vector<int> in3(3, 2), out4(4, 2);
  double worst = 0.0;
  for (const Diagram& seed : {Create({0}), Create({1})}) {
    const Tensor a = evaluate_dense(unroll(delay(qmode, seed), 3), in3, out4);
    const Tensor b = evaluate_dense(delay_unrolled(qmode, seed, 3), in3, out4);
    worst = std::max(worst, a.max_abs_diff(b));
  }
  const Diagram cnot = (Z(1, 2) * Id(qubit) >> Id(qubit) * X(2, 1)) * Complex(std::sqrt(2.0));
  const Diagram step = cnot >> Swap(qubit, qubit);
  const Diagram u = unroll(feedback(step, qubit, qubit, qubit, Ket({0})), 3);
  bool typed = true;
  try {
    u.check();
  } catch (const std::exception&) {
    typed = false;
  }
  typed = typed && u.dom() == qubit.pow(3) && u.cod() == qubit.pow(4);
  const Diagram q = Id(qubit), sw = Swap(qubit, qubit);
  const Diagram hand = Ket({0}) * Id(qubit.pow(3)) >> step * q * q >> sw * q * q >> q * step * q >> q * sw * q >>
                       q * q * step >> q * q * sw;
  const double dl = evaluate_dense(u, in3, out4).max_abs_diff(evaluate_dense(hand, in3, out4));
  return {worst <= 1e-12 && typed && dl <= 1e-12,
          "delay deviation " + fmt(worst) + ", ladder deviation " + fmt(dl) + (typed ? "" : ", ill-typed")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1  HOM dip, both backends", hom_dip},
      {"2  distinguishable HOM and overlap sweep", hom_distinguishable_sweep},
      {"3  lossy HOM", hom_loss},
      {"4  ZX teleportation is the identity channel", teleport_zx_identity},
      {"5  fusion teleportation", teleport_fusion_identity},
      {"6  fusion fidelity sweep", fusion_sweep},
      {"7  permanent algorithms and normalization", permanents},
      {"8  TN vs permanent on random linear optics", cross_backend},
      {"9  bit flip and dephasing", qubit_noise},
      {"10 contraction planner", planner},
      {"11 Bose-Hubbard gradient descent", vqe},
      {"12 benchmark harness n = 2..6", bench},
      {"13 streams", streams},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %s  (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
