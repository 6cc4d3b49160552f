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

#pragma once

#include <complex>
#include <initializer_list>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace photonet {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The four primitive system types. bit/qubit are two-level; mode/qmode carry
/// a photon number whose dimension is fixed later by truncation inference.
enum class WireType { bit, mode, qubit, qmode };

inline bool is_quantum(WireType t) { return t == WireType::qubit || t == WireType::qmode; }
inline bool is_classical(WireType t) { return !is_quantum(t); }
inline bool is_two_level(WireType t) { return t == WireType::bit || t == WireType::qubit; }
inline bool is_fock(WireType t) { return !is_two_level(t); }

std::string to_string(WireType t);
WireType wire_type_from_string(const std::string& s);

/// An ordered list of wire types. The empty list is the monoidal unit.
class Ty {
 public:
  Ty() = default;
  Ty(std::initializer_list<WireType> factors) : factors_(factors) {}
  explicit Ty(std::vector<WireType> factors) : factors_(std::move(factors)) {}
  Ty(WireType t) : factors_{t} {}  // NOLINT: implicit on purpose, `Ty t = qubit;`

  static Ty repeat(WireType t, int n) { return Ty(std::vector<WireType>(static_cast<size_t>(n), t)); }

  size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  WireType operator[](size_t i) const { return factors_[i]; }
  const std::vector<WireType>& factors() const { return factors_; }
  auto begin() const { return factors_.begin(); }
  auto end() const { return factors_.end(); }

  Ty operator+(const Ty& other) const;
  Ty slice(size_t begin, size_t end) const;
  Ty pow(int n) const;

  bool operator==(const Ty&) const = default;

 private:
  std::vector<WireType> factors_;
};

std::string to_string(const Ty& t);

inline const Ty bit = Ty(WireType::bit);
inline const Ty mode = Ty(WireType::mode);
inline const Ty qubit = Ty(WireType::qubit);
inline const Ty qmode = Ty(WireType::qmode);

using Bindings = std::map<std::string, double>;

/// A real parameter: an affine combination of named real symbols,
/// `constant + sum_i coeff_i * symbol_i`. A bare literal has no terms and a
/// bare symbol has a single unit coefficient.
class Param {
 public:
  Param() = default;
  Param(double value) : constant_(value) {}  // NOLINT
  Param(int value) : constant_(value) {}     // NOLINT
  static Param symbol(const std::string& name);

  bool is_numeric() const { return terms_.empty(); }
  bool is_bare_symbol() const;
  /// Throws SymbolicDiagram when unbound symbols remain.
  double value() const;
  double constant() const { return constant_; }
  double coefficient(const std::string& sym) const;
  const std::map<std::string, double>& terms() const { return terms_; }
  std::set<std::string> free_symbols() const;

  Param substitute(const Bindings& bindings) const;

  Param operator-() const;
  Param operator+(const Param& other) const;
  Param operator-(const Param& other) const { return *this + (-other); }
  Param operator*(double k) const;
  friend Param operator*(double k, const Param& p) { return p * k; }

  bool operator==(const Param&) const = default;

 private:
  double constant_ = 0.0;
  std::map<std::string, double> terms_;
};

std::string to_string(const Param& p);

}  // namespace photonet
