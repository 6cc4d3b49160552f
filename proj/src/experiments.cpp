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

#include "photonet/experiments.hpp"

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "photonet/errors.hpp"
#include "photonet/io.hpp"
#include "photonet/vqe.hpp"

namespace photonet {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Diagram bell_pair() { return Z(0, 2) * Scalar(std::sqrt(0.5)); }

EvalOptions with_backend(Backend b) {
  EvalOptions o;
  o.backend = b;
  return o;
}

}  // namespace

Diagram hom_diagram() { return Create({1}) * Create({1}) >> BS(); }

Diagram hom_distinguishable(const InternalState& s1, const InternalState& s2) {
  return Create({1, 1}, {s1, s2}) >> BS() >> NumberResolvingMeasurement(2);
}

Diagram hom_lossy(double p) {
  return Create({1, 1}) >> PhotonLoss(p) * Id(qmode) >> BS() >> NumberResolvingMeasurement(2) >> Add(2);
}

Diagram teleport_zx() {
  const Diagram cnot = (Z(1, 2) * Id(qubit) >> Id(qubit) * X(2, 1)) * Complex(std::sqrt(2.0));
  const Diagram bell = Scalar(std::sqrt(0.5)) * Z(0, 2);
  return Id(qubit) * bell >> cnot * Id(qubit) >> H() * Id(qubit.pow(2)) >> Measure(1) * Measure(1) * Id(qubit) >>
         Id(bit) * CtrlX() >> CtrlZ();
}

Diagram teleport_fusion() {
  const Diagram correction = BitControlledGate(HadamardBS() >> Phase(0.5) * Id(qmode) >> HadamardBS());
  const Diagram channel_bell = Z(0, 2) * Scalar(std::sqrt(0.5)) >> DualRail(1) * DualRail(1);
  return DualRail(1) * channel_bell >> FusionTypeII() * Id(qmode.pow(2)) >> PostselectBit(1) * correction >>
         DualRail(1).dagger();
}

std::vector<std::array<double, 2>> rotated_unit_vectors(int n) {
  if (n < 2) throw RangeError("rotated_unit_vectors needs n >= 2");
  std::vector<std::array<double, 2>> out;
  for (int i = 0; i < n; ++i) {
    const double t = i * (std::numbers::pi / 2) / (n - 1);
    out.push_back({std::cos(t), std::sin(t)});
  }
  return out;
}

FusionPoint fusion_fidelity(const InternalState& s1, const InternalState& s2) {
  if (s1.size() != s2.size()) throw DimensionMismatch("internal states of different dimension");
  const Diagram bell = bell_pair();
  const Diagram encoding = DualRail(1, {s1}) * DualRail(1, {s2});
  const Diagram post = PostselectBit(1) * PostselectBit(0);
  const Diagram experiment = bell * bell >> Id(qubit) * (encoding >> FusionTypeII() >> post) * Id(qubit);
  const int dim = static_cast<int>(s1.size());
  const double num = evaluate(inflate(experiment >> bell.dagger(), dim)).scalar().real();
  const double den = evaluate(inflate(experiment >> Discard(2), dim)).scalar().real();
  Complex ov = 0.0;
  for (size_t i = 0; i < s1.size(); ++i) ov += std::conj(s1[i]) * s2[i];
  return FusionPoint{std::abs(ov), den > 0 ? num / den : 0.0, den};
}

std::vector<FusionPoint> fusion_fidelity_sweep(int n) {
  std::vector<FusionPoint> out;
  for (const auto& v : rotated_unit_vectors(n)) out.push_back(fusion_fidelity({1.0, 0.0}, {v[0], v[1]}));
  return out;
}

Diagram bose_hubbard_state(int layers) { return Create({1, 1, 1}) >> ansatz(3, layers); }

DiagramSum bose_hubbard_energy(int layers) {
  const DiagramSum h = bose_hubbard(LatticeGraph::path(2), BHParams{0.10, 4.0, 2.0});
  return expectation(bose_hubbard_state(layers), tensor_identity(h, qmode));
}

bool ExampleReport::ok() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> example_names() {
  return {"hom",        "hom-distinguishable",   "hom-loss",         "teleport-zx",
          "teleport-fusion", "fusion-fidelity-sweep", "bose-hubbard-gd", "monomial-bench"};
}

namespace {

double prob_at(const std::map<std::vector<int>, double>& p, std::vector<int> key) {
  auto it = p.find(key);
  return it == p.end() ? 0.0 : it->second;
}

double max_dev_from_identity(const Tensor& t, int n, Complex scale) {
  if (t.size() != static_cast<size_t>(n) * n) throw ShapeMismatch("expected " + std::to_string(n * n) + " entries");
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dev = std::max(dev, std::abs(t[static_cast<size_t>(i * n + j)] - (i == j ? scale : 0.0)));
  }
  return dev;
}

ExampleReport example_hom() {
  ExampleReport r{"hom", {}, ""};
  std::ostringstream csv;
  csv << "backend,p11,p20,p02\n";
  for (Backend b : {Backend::tn, Backend::permanent}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = evaluate(hom_diagram(), with_backend(b)).prob_dist();
    const double dt = seconds_since(t0);
    const std::string name = b == Backend::tn ? "tn" : "permanent";
    const double p11 = prob_at(p, {1, 1}), p20 = prob_at(p, {2, 0}), p02 = prob_at(p, {0, 2});
    csv << name << "," << fmt(p11) << "," << fmt(p20) << "," << fmt(p02) << "\n";
    r.checks.push_back({name + ": P(1,1) = 0", std::abs(p11) <= 1e-9, fmt(p11)});
    r.checks.push_back({name + ": P(2,0) = P(0,2) = 0.5", std::abs(p20 - 0.5) <= 1e-9 && std::abs(p02 - 0.5) <= 1e-9,
                        fmt(p20) + ", " + fmt(p02)});
    r.checks.push_back({name + ": runtime < 1 s", dt < 1.0, fmt(dt) + " s"});
  }
  r.csv = csv.str();
  return r;
}

ExampleReport example_hom_distinguishable() {
  ExampleReport r{"hom-distinguishable", {}, ""};
  const InternalState s1 = {1.0, 0.0}, s2 = {std::sqrt(0.9), std::sqrt(0.1)};
  const double p = prob_at(evaluate(inflate(hom_distinguishable(s1, s2), 2)).prob_dist(), {1, 1});
  r.checks.push_back({"P(1,1) = 0.05 for s2 = (sqrt 0.9, sqrt 0.1)", std::abs(p - 0.05) <= 1e-6, fmt(p)});
  std::ostringstream csv;
  csv << "overlap,p11,expected\n";
  double worst = 0.0;
  for (const auto& v : rotated_unit_vectors(10)) {
    const double q = prob_at(evaluate(inflate(hom_distinguishable(s1, {v[0], v[1]}), 2)).prob_dist(), {1, 1});
    const double want = 0.5 - 0.5 * v[0] * v[0];
    worst = std::max(worst, std::abs(q - want));
    csv << fmt(v[0]) << "," << fmt(q) << "," << fmt(want) << "\n";
  }
  r.checks.push_back({"10-point sweep matches 0.5 - 0.5 |x|^2", worst <= 1e-6, "max deviation " + fmt(worst)});
  r.csv = csv.str();
  return r;
}

ExampleReport example_hom_loss() {
  ExampleReport r{"hom-loss", {}, ""};
  const auto p = evaluate(hom_lossy(0.8)).prob_dist();
  std::ostringstream csv;
  csv << "detected,probability\n";
  for (const auto& [k, v] : p) {
    if (v > 1e-15) csv << k.at(0) << "," << fmt(v) << "\n";
  }
  const double p1 = prob_at(p, {1});
  r.checks.push_back({"P(total detected = 1) = 0.2", std::abs(p1 - 0.2) <= 1e-9, fmt(p1)});
  r.csv = csv.str();
  return r;
}

ExampleReport example_teleport_zx() {
  ExampleReport r{"teleport-zx", {}, ""};
  const auto res = evaluate(teleport_zx());
  const double dev = max_dev_from_identity(res.tensor(), 4, 1.0);
  r.checks.push_back({"doubled channel is the 4x4 identity superoperator", dev <= 1e-9, "max deviation " + fmt(dev)});
  return r;
}

ExampleReport example_teleport_fusion() {
  ExampleReport r{"teleport-fusion", {}, ""};
  const Tensor got = evaluate(teleport_fusion()).tensor();
  // The reference is read as a channel too, so its scalar enters squared.
  EvalOptions as_channel;
  as_channel.force_doubled = true;
  const Tensor want = evaluate(Id(qubit) * Scalar(std::sqrt(0.5)), as_channel).tensor();
  const double dev = got.max_abs_diff(want);
  r.checks.push_back({"channel = Id(qubit) (x) Scalar(sqrt 0.5)", dev <= 1e-9, "max deviation " + fmt(dev)});
  const double dev2 = max_dev_from_identity(got, 4, 0.5);
  r.checks.push_back({"doubled tensor = 0.5 identity superoperator", dev2 <= 1e-9, "max deviation " + fmt(dev2)});
  return r;
}

ExampleReport example_fusion_sweep() {
  ExampleReport r{"fusion-fidelity-sweep", {}, ""};
  const auto pts = fusion_fidelity_sweep(30);
  std::ostringstream csv;
  csv << "overlap,fidelity,p_succ\n";
  bool mono = true, psucc = true;
  for (size_t i = 0; i < pts.size(); ++i) {
    csv << fmt(pts[i].overlap) << "," << fmt(pts[i].fidelity) << "," << fmt(pts[i].p_succ) << "\n";
    // Overlap decreases along the sweep, so F must not increase.
    if (i > 0 && pts[i].fidelity > pts[i - 1].fidelity + 1e-9) mono = false;
    if (!(pts[i].p_succ > 0.0 && pts[i].p_succ <= 1.0 + 1e-12)) psucc = false;
  }
  r.checks.push_back({"F(x = 1) = 1", std::abs(pts.front().fidelity - 1.0) <= 1e-6, fmt(pts.front().fidelity)});
  r.checks.push_back({"F nondecreasing in overlap", mono, ""});
  r.checks.push_back({"p_succ in (0, 1]", psucc, ""});
  r.csv = csv.str();
  return r;
}

std::vector<double> uniform_point(std::mt19937_64& rng, size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

ExampleReport example_bose_hubbard(const ExampleOptions& opts) {
  ExampleReport r{"bose-hubbard-gd", {}, ""};
  const auto t0 = std::chrono::steady_clock::now();
  const DiagramSum energy = bose_hubbard_energy();
  const auto syms = sorted_symbols(energy);
  auto bind = [&](const std::vector<double>& x) {
    Bindings b;
    for (size_t k = 0; k < syms.size(); ++k) b[syms[k]] = x[k];
    return b;
  };
  // The constant start x = 2 is a stationary point of this ansatz.
  {
    double g2 = 0.0;
    const auto b = bind(std::vector<double>(syms.size(), 2.0));
    for (const auto& s : syms) g2 = std::max(g2, std::abs(evaluate_expression(grad(energy, s), b, Backend::permanent)));
    r.checks.push_back({"gradient vanishes at x = (2, ..., 2)", g2 <= 1e-9, "max |dE| " + fmt(g2)});
  }
  std::mt19937_64 rng(opts.seed);
  const auto traj = gradient_descent(energy, uniform_point(rng, syms.size(), 0.0, 1.0), 0.001, 30, Backend::permanent);
  r.checks.push_back({"final energy < initial energy", traj.back().energy < traj.front().energy,
                      fmt(traj.front().energy) + " -> " + fmt(traj.back().energy)});
  double worst = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const auto x = uniform_point(rng, syms.size(), 0.0, 1.0);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < syms.size(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (evaluate_expression(energy, bind(xp), Backend::permanent).real() -
                         evaluate_expression(energy, bind(xm), Backend::permanent).real()) /
                        (2 * h);
      const double g = evaluate_expression(grad(energy, syms[i]), bind(x), Backend::permanent).real();
      num += (g - fd) * (g - fd);
      den += fd * fd;
    }
    worst = std::max(worst, std::sqrt(num) / std::max(std::sqrt(den), 1e-300));
  }
  r.checks.push_back({"analytic gradient matches central differences", worst <= 1e-5, "max relative error " + fmt(worst)});
  const double dt = seconds_since(t0);
  r.checks.push_back({"runtime < 2 min", dt < 120.0, fmt(dt) + " s"});
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  if (opts.restarts > 0) {
    csv << "\nrestart,initial_energy,final_energy\n";
    for (int k = 0; k < opts.restarts; ++k) {
      const auto tr = gradient_descent(energy, uniform_point(rng, syms.size(), 0.0, 1.0), 0.001, 30, Backend::permanent);
      csv << k << "," << fmt(tr.front().energy) << "," << fmt(tr.back().energy) << "\n";
    }
  }
  r.csv = csv.str();
  return r;
}

ExampleReport example_monomial(const ExampleOptions& opts) {
  ExampleReport r{"monomial-bench", {}, ""};
  std::mt19937_64 rng(opts.seed);
  Diagram u = ansatz(4, 4);
  Bindings b;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& s : u.free_symbols()) b[s] = unif(rng);
  u = u.substitute(b);
  const Diagram d = Create({1, 1, 1, 1}) >> u >> monomial_layer({1, 2, 1, 3}) >> u.dagger() >> Select({1, 1, 1, 1});
  const Complex tn = evaluate(d, with_backend(Backend::tn)).scalar();
  const Complex pm = evaluate(d, with_backend(Backend::permanent)).scalar();
  r.checks.push_back({"tn and permanent agree", std::abs(tn - pm) <= 1e-8, fmt(tn.real()) + " vs " + fmt(pm.real())});
  r.checks.push_back({"monomial expectation is real and nonnegative", std::abs(tn.imag()) <= 1e-9 && tn.real() >= -1e-12,
                      fmt(tn.real())});
  BenchConfig cfg;
  cfg.photons = {2, 3, 4};
  cfg.depths = {DepthRule::constant, DepthRule::log, DepthRule::linear};
  cfg.base_seed = opts.seed;
  const auto recs = run_bench(cfg);
  double worst = 0.0;
  for (size_t i = 0; i + 1 < recs.size(); i += 2) {
    if (recs[i].status == "ok" && recs[i + 1].status == "ok") worst = std::max(worst, std::abs(recs[i].value - recs[i + 1].value));
  }
  r.checks.push_back({"bench backends agree to 1e-6", worst <= 1e-6, "max difference " + fmt(worst)});
  std::ostringstream csv;
  write_bench_csv(csv, recs, true);
  r.csv = csv.str();
  return r;
}

}  // namespace

ExampleReport run_example(const std::string& name, const ExampleOptions& opts) {
  if (name == "hom") return example_hom();
  if (name == "hom-distinguishable") return example_hom_distinguishable();
  if (name == "hom-loss") return example_hom_loss();
  if (name == "teleport-zx") return example_teleport_zx();
  if (name == "teleport-fusion") return example_teleport_fusion();
  if (name == "fusion-fidelity-sweep") return example_fusion_sweep();
  if (name == "bose-hubbard-gd") return example_bose_hubbard(opts);
  if (name == "monomial-bench") return example_monomial(opts);
  throw RangeError("unknown example '" + name + "'");
}

// ----------------------------------------------------------------- bench

DepthRule depth_rule_from_string(const std::string& s) {
  if (s == "constant") return DepthRule::constant;
  if (s == "log") return DepthRule::log;
  if (s == "linear") return DepthRule::linear;
  throw RangeError("unknown depth rule '" + s + "'");
}

std::string to_string(DepthRule r) {
  switch (r) {
    case DepthRule::constant: return "constant";
    case DepthRule::log: return "log";
    case DepthRule::linear: return "linear";
  }
  return "";
}

int depth_for(DepthRule r, int modes) {
  if (modes < 1) throw RangeError("modes must be positive");
  switch (r) {
    case DepthRule::constant: return 2;
    case DepthRule::log: {
      // floor(log2(7n/5)) in integers: largest l with 5 * 2^l <= 7n.
      int l = 0;
      while (5LL * (1LL << (l + 1)) <= 7LL * modes) ++l;
      return std::max(1, l);
    }
    case DepthRule::linear: return modes / 2 + 1;
  }
  return 1;
}

std::string depth_formula(DepthRule r) {
  switch (r) {
    case DepthRule::constant: return "l=2";
    case DepthRule::log: return "l=floor(log2(7n/5))";
    case DepthRule::linear: return "l=floor(n/2+1)";
  }
  return "";
}

int monomial_degree(int photons) { return (3 * photons) / 2; }

BenchCircuit make_bench_circuit(int modes, int photons, DepthRule depth, std::uint64_t seed) {
  if (modes < 2) throw RangeError("bench circuits need at least 2 modes");
  if (photons < 0) throw RangeError("negative photon number");
  BenchCircuit c;
  c.modes = modes;
  c.photons = photons;
  c.depth = depth;
  c.id = "m" + std::to_string(modes) + "-n" + std::to_string(photons) + "-" + to_string(depth) + "-s" + std::to_string(seed);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Diagram u = ansatz(modes, depth_for(depth, modes));
  Bindings b;
  for (const auto& s : u.free_symbols()) b[s] = unif(rng);
  u = u.substitute(b);
  std::vector<int> occ(static_cast<size_t>(modes), 0);
  for (int k = 0; k < photons; ++k) ++occ[static_cast<size_t>(k % modes)];
  c.powers.assign(static_cast<size_t>(modes), 0);
  std::uniform_int_distribution<int> pick(0, modes - 1);
  for (int k = 0; k < monomial_degree(photons); ++k) ++c.powers[static_cast<size_t>(pick(rng))];
  c.diagram = Create(occ) >> u >> monomial_layer(c.powers) >> u.dagger() >> Select(occ);
  return c;
}

namespace {

struct Outcome {
  std::string status = "error";
  double value = 0.0;
  std::uint64_t peak = 0;
  double seconds = 0.0;
};

Outcome compute(const BenchCircuit& c, Backend backend) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (backend == Backend::tn) {
      const Compiled comp = compile(c.diagram);
      o.value = comp.tensor[0].real();
      for (const auto& n : comp.network.nodes) o.peak = std::max<std::uint64_t>(o.peak, n.tensor.size());
      for (const auto& s : comp.path.steps) {
        std::uint64_t sz = 1;
        for (int d : s.shape) sz *= static_cast<std::uint64_t>(d);
        o.peak = std::max(o.peak, sz);
      }
    } else {
      const SparseState s = permanent_evaluate(c.diagram);
      auto it = s.find({});
      o.value = it == s.end() ? 0.0 : it->second.real();
      o.peak = composition_count(c.photons, c.modes);
    }
    o.status = "ok";
  } catch (const BackendIneligible&) {
    o.status = "ineligible";
  } catch (const std::bad_alloc&) {
    o.status = "oom";
  } catch (const TooLarge&) {
    o.status = "oom";
  } catch (const std::exception&) {
    o.status = "error";
  }
  o.seconds = seconds_since(t0);
  return o;
}

struct Task {
  const BenchCircuit* circuit;
  Backend backend;
  size_t slot;
};

struct Running {
  Task task;
  int fd;
  std::chrono::steady_clock::time_point start;
};

BenchRecord make_record(const Task& t, const Outcome& o) {
  return BenchRecord{t.circuit->id, t.circuit->modes, t.circuit->photons, to_string(t.circuit->depth),
                     t.backend == Backend::tn ? "tn" : "permanent", o.seconds, o.peak, o.status, o.value};
}

Outcome read_outcome(int fd) {
  std::string buf;
  char chunk[256];
  ssize_t got;
  while ((got = read(fd, chunk, sizeof chunk)) > 0) buf.append(chunk, static_cast<size_t>(got));
  Outcome o;
  std::istringstream in(buf);
  if (!(in >> o.status >> o.value >> o.peak >> o.seconds)) o.status = "error";
  return o;
}

std::vector<BenchRecord> run_tasks(const std::vector<Task>& tasks, const BenchLimits& limits) {
  std::vector<BenchRecord> out(tasks.size());
  if (!limits.isolate) {
    for (const auto& t : tasks) out[t.slot] = make_record(t, compute(*t.circuit, t.backend));
    return out;
  }
  const size_t jobs = static_cast<size_t>(std::max(1, limits.jobs));
  std::map<pid_t, Running> running;
  size_t next = 0;
  while (next < tasks.size() || !running.empty()) {
    while (next < tasks.size() && running.size() < jobs) {
      const Task& t = tasks[next++];
      int fds[2];
      if (pipe(fds) != 0) throw Error("pipe failed");
      std::fflush(nullptr);
      const pid_t pid = fork();
      if (pid < 0) throw Error("fork failed");
      if (pid == 0) {
        close(fds[0]);
        if (limits.mem_cap > 0) {
          rlimit rl{static_cast<rlim_t>(limits.mem_cap), static_cast<rlim_t>(limits.mem_cap)};
          setrlimit(RLIMIT_AS, &rl);
        }
        const Outcome o = compute(*t.circuit, t.backend);
        char msg[160];
        const int len = std::snprintf(msg, sizeof msg, "%s %.17g %llu %.9g\n", o.status.c_str(), o.value,
                                      static_cast<unsigned long long>(o.peak), o.seconds);
        if (write(fds[1], msg, static_cast<size_t>(len)) < 0) _exit(1);
        _exit(0);
      }
      close(fds[1]);
      running.emplace(pid, Running{t, fds[0], std::chrono::steady_clock::now()});
    }
    bool progressed = false;
    for (auto it = running.begin(); it != running.end();) {
      const auto& [pid, run] = *it;
      int wstatus = 0;
      const pid_t done = waitpid(pid, &wstatus, WNOHANG);
      Outcome o;
      bool finished = false;
      if (done == pid) {
        finished = true;
        if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 0) {
          o = read_outcome(run.fd);
        } else {
          o.status = limits.mem_cap > 0 ? "oom" : "error";
          o.seconds = seconds_since(run.start);
        }
      } else if (seconds_since(run.start) > limits.timeout_s) {
        kill(pid, SIGKILL);
        waitpid(pid, &wstatus, 0);
        finished = true;
        o.status = "timeout";
        o.seconds = seconds_since(run.start);
      }
      if (finished) {
        close(run.fd);
        out[run.task.slot] = make_record(run.task, o);
        it = running.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (!progressed && !running.empty()) std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return out;
}

}  // namespace

std::vector<BenchRecord> run_bench_circuit(const BenchCircuit& c, const BenchLimits& limits) {
  return run_tasks({Task{&c, Backend::tn, 0}, Task{&c, Backend::permanent, 1}}, limits);
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  std::vector<BenchCircuit> circuits;
  for (int n : cfg.photons) {
    std::vector<int> modes = cfg.modes.empty() ? std::vector<int>{std::max(2, n)} : cfg.modes;
    for (int m : modes) {
      for (DepthRule r : cfg.depths) {
        for (int s = 0; s < cfg.seeds; ++s) circuits.push_back(make_bench_circuit(m, n, r, cfg.base_seed + static_cast<std::uint64_t>(s)));
      }
    }
  }
  if (!cfg.save_dir.empty()) {
    std::filesystem::create_directories(cfg.save_dir);
    for (const auto& c : circuits) {
      CircuitFile f;
      f.diagram = c.diagram;
      f.meta = {{"id", c.id},           {"modes", c.modes},   {"photons", c.photons}, {"depth", to_string(c.depth)},
                {"depth_formula", depth_formula(c.depth)}, {"powers", c.powers}};
      save_circuit(f, (std::filesystem::path(cfg.save_dir) / (c.id + ".json")).string());
    }
  }
  std::vector<Task> tasks;
  for (const auto& c : circuits) {
    tasks.push_back(Task{&c, Backend::tn, tasks.size()});
    tasks.push_back(Task{&c, Backend::permanent, tasks.size()});
  }
  return run_tasks(tasks, cfg.limits);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& recs, bool omit_timing) {
  out << "circuit_id,modes,photons,depth,backend,wall_time,peak_size,status,value\n";
  for (const auto& r : recs) {
    char val[64];
    std::snprintf(val, sizeof val, "%.15g", r.value);
    char wt[64] = "";
    if (!omit_timing) std::snprintf(wt, sizeof wt, "%.6f", r.wall_time);
    out << r.circuit_id << "," << r.modes << "," << r.photons << "," << r.depth << "," << r.backend << "," << wt << ","
        << r.peak_size << "," << r.status << "," << (r.status == "ok" ? std::string(val) : std::string()) << "\n";
  }
}

}  // namespace photonet
