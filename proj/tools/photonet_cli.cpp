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
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "photonet/channels.hpp"
#include "photonet/compile_tn.hpp"
#include "photonet/errors.hpp"
#include "photonet/experiments.hpp"
#include "photonet/io.hpp"
#include "photonet/permanent.hpp"

using namespace photonet;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitIneligible = 3;
constexpr int kExitSymbolic = 4;
constexpr int kExitMismatch = 5;

// Round-off below 1e-14 prints as zero.
std::string num(double v) {
  if (std::abs(v) < 1e-14) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string key(const std::vector<int>& k) {
  std::string s = "(";
  for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

bool all_fock(const Ty& ty) {
  for (auto t : ty) {
    if (!is_fock(t)) return false;
  }
  return true;
}

void print_prob(const EvalResult& r) {
  auto p = r.prob_dist();
  std::map<std::vector<int>, double> shown;
  std::set<int> sectors;
  for (const auto& [k, v] : p) {
    if (v > 1e-14) {
      shown[k] = v;
      int n = 0;
      for (int x : k) n += x;
      sectors.insert(n);
    }
  }
  // Zero-probability patterns inside an occupied photon-number sector are
  // part of the answer (the HOM coincidence, say).
  if (all_fock(r.cod()) && !r.cod().empty()) {
    for (int n : sectors) {
      if (composition_count(n, static_cast<int>(r.cod().size())) > 10000) continue;
      for (const auto& k : compositions(n, static_cast<int>(r.cod().size()))) {
        auto it = p.find(k);
        shown.emplace(k, it == p.end() ? 0.0 : it->second);
      }
    }
  }
  std::cout << "{";
  bool first = true;
  for (const auto& [k, v] : shown) {
    std::cout << (first ? "" : ", ") << "\"" << key(k) << "\": " << num(v);
    first = false;
  }
  std::cout << "}\n";
}

void print_amp(const EvalResult& r) {
  const Tensor a = r.amplitudes();
  std::cout << "{";
  bool first = true;
  for_each_index(a.shape(), [&](std::span<const int> idx) {
    const Complex z = a.at(idx);
    if (std::abs(z) <= 1e-14) return;
    std::cout << (first ? "" : ", ") << "\"" << key({idx.begin(), idx.end()}) << "\": [" << num(z.real()) << ", "
              << num(z.imag()) << "]";
    first = false;
  });
  std::cout << "}\n";
}

void print_dm(const EvalResult& r) {
  const auto m = r.density_matrix();
  std::cout << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << (i ? ",\n " : "") << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::cout << (j ? ", " : "") << "[" << num(m(i, j).real()) << ", " << num(m(i, j).imag()) << "]";
    }
    std::cout << "]";
  }
  std::cout << "]\n";
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const BackendIneligible& e) {
    std::cerr << "backend ineligible: " << e.what() << "\n";
    return kExitIneligible;
  } catch (const SymbolicDiagram& e) {
    std::cerr << "symbolic diagram: " << e.what() << "\n";
    return kExitSymbolic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonet: typed string diagrams for hybrid photonic circuits"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Evaluate a circuit file");
  std::string file, backend = "tn", view = "prob", algo = "auto", planner = "auto";
  int cap = 0;
  bool dump_plan = false, doubled = false;
  std::vector<std::string> binds;
  eval->add_option("file", file, "Circuit JSON")->required();
  eval->add_option("--backend", backend, "tn, permanent or auto")->check(CLI::IsMember({"tn", "permanent", "auto"}));
  eval->add_option("--view", view, "prob, amp or dm")->check(CLI::IsMember({"prob", "amp", "dm"}));
  eval->add_option("--cap", cap, "Default cap for open inputs");
  eval->add_option("--algo", algo, "Permanent algorithm")->check(CLI::IsMember({"auto", "naive", "ryser", "glynn"}));
  eval->add_option("--planner", planner, "Contraction planner")->check(CLI::IsMember({"auto", "greedy", "optimal"}));
  eval->add_option("--bind", binds, "Symbol binding name=value (repeatable)");
  eval->add_flag("--dump-plan", dump_plan, "Print the contraction plan as JSON");
  eval->add_flag("--doubled", doubled, "Force the doubled (mixed-state) evaluation");

  auto* canon = app.add_subcommand("canon", "Print the canonical form of a circuit file");
  std::string canon_file;
  canon->add_option("file", canon_file, "Circuit JSON")->required();

  auto* example = app.add_subcommand("example", "Run a bundled experiment");
  std::string ex_name, ex_csv;
  ExampleOptions ex_opts;
  example->add_option("name", ex_name, "Experiment name")->required()->check(CLI::IsMember(example_names()));
  example->add_option("--csv", ex_csv, "Write the result table here");
  example->add_option("--seed", ex_opts.seed, "RNG seed");
  example->add_option("--restarts", ex_opts.restarts, "Random restarts (bose-hubbard-gd)");

  auto* bench = app.add_subcommand("bench", "TN vs permanent benchmark");
  std::string modes_s, photons_s = "2,3,4,5,6", out_file;
  std::vector<std::string> depths_s = {"constant", "log", "linear"};
  BenchConfig cfg;
  bool omit_timing = false;
  bench->add_option("--modes", modes_s, "Comma-separated mode counts (default: one per photon count)");
  bench->add_option("--photons", photons_s, "Comma-separated photon counts");
  bench->add_option("--depth", depths_s, "Depth rules")->check(CLI::IsMember({"constant", "log", "linear"}))->delimiter(',');
  bench->add_option("--seeds", cfg.seeds, "Circuits per configuration");
  bench->add_option("--seed", cfg.base_seed, "First seed");
  bench->add_option("--timeout", cfg.limits.timeout_s, "Seconds per record");
  bench->add_option("--mem-cap", cfg.limits.mem_cap, "Address-space cap per record, bytes");
  bench->add_option("--jobs", cfg.limits.jobs, "Records run in parallel");
  bench->add_option("--save-dir", cfg.save_dir, "Write each circuit as JSON here");
  bench->add_option("--out", out_file, "CSV output (default stdout)");
  bench->add_flag("--omit-timing", omit_timing, "Leave wall_time blank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  if (*eval) {
    return guarded([&] {
      if (cap > 0) set_default_cap(cap);
      CircuitFile c = load_circuit(file);
      for (const auto& b : binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos) throw ParseError("--bind expects name=value, got '" + b + "'");
        c.symbols[b.substr(0, eq)] = std::stod(b.substr(eq + 1));
      }
      Diagram d = c.symbols.empty() ? c.diagram : c.diagram.substitute(c.symbols);
      EvalOptions opts;
      opts.backend = backend == "tn" ? Backend::tn : backend == "permanent" ? Backend::permanent : Backend::automatic;
      opts.algo = algo == "naive" ? PermanentAlgo::naive
                  : algo == "ryser" ? PermanentAlgo::ryser
                  : algo == "glynn" ? PermanentAlgo::glynn
                                    : PermanentAlgo::automatic;
      opts.planner = planner == "greedy" ? Planner::greedy : planner == "optimal" ? Planner::optimal : Planner::automatic;
      opts.force_doubled = doubled;
      if (dump_plan) {
        if (!d.free_symbols().empty()) throw SymbolicDiagram("unbound symbols");
        CompileOptions co;
        co.planner = opts.planner;
        const bool pure = is_pure(d) && !doubled;
        std::cout << plan_report(compile(pure ? d : double_diagram(d), co)).dump(2) << "\n";
      }
      const EvalResult r = evaluate(d, opts);
      if (r.dom().empty() && r.cod().empty()) {
        const Complex z = r.scalar();
        std::cout << "scalar: " << num(z.real());
        if (std::abs(z.imag()) > 1e-14) std::cout << (z.imag() < 0 ? " - " : " + ") << num(std::abs(z.imag())) << "i";
        std::cout << "\n";
        return 0;
      }
      if (view == "prob") print_prob(r);
      if (view == "amp") print_amp(r);
      if (view == "dm") print_dm(r);
      return 0;
    });
  }

  if (*canon) {
    return guarded([&] {
      std::cout << serialize_circuit(load_circuit(canon_file)).dump(2) << "\n";
      return 0;
    });
  }

  if (*example) {
    return guarded([&] {
      const ExampleReport rep = run_example(ex_name, ex_opts);
      for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.label;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
      }
      if (!rep.csv.empty()) {
        if (ex_csv.empty()) {
          std::cout << rep.csv;
        } else {
          std::ofstream(ex_csv) << rep.csv;
        }
      }
      return rep.ok() ? 0 : kExitMismatch;
    });
  }

  if (*bench) {
    return guarded([&] {
      cfg.modes = parse_int_list(modes_s);
      cfg.photons = parse_int_list(photons_s);
      for (const auto& s : depths_s) cfg.depths.push_back(depth_rule_from_string(s));
      const auto recs = run_bench(cfg);
      if (out_file.empty()) {
        write_bench_csv(std::cout, recs, omit_timing);
      } else {
        std::ofstream out(out_file);
        write_bench_csv(out, recs, omit_timing);
      }
      return 0;
    });
  }
  return 0;
}
