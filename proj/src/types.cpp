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

#include "photonet/types.hpp"

#include <iostream>
#include <mutex>
#include <sstream>

#include "photonet/errors.hpp"

namespace photonet {

namespace {
std::mutex g_warn_mutex;
WarningHandler g_warn_handler;
}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(message);
  } else {
    std::cerr << "photonet: warning: " << message << "\n";
  }
}

std::string to_string(WireType t) {
  switch (t) {
    case WireType::bit:
      return "bit";
    case WireType::mode:
      return "mode";
    case WireType::qubit:
      return "qubit";
    case WireType::qmode:
      return "qmode";
  }
  return "?";
}

WireType wire_type_from_string(const std::string& s) {
  if (s == "bit") return WireType::bit;
  if (s == "mode") return WireType::mode;
  if (s == "qubit") return WireType::qubit;
  if (s == "qmode") return WireType::qmode;
  throw ParseError("unknown wire type '" + s + "'");
}

Ty Ty::operator+(const Ty& other) const {
  std::vector<WireType> out = factors_;
  out.insert(out.end(), other.factors_.begin(), other.factors_.end());
  return Ty(std::move(out));
}

Ty Ty::slice(size_t begin, size_t end) const {
  return Ty(std::vector<WireType>(factors_.begin() + static_cast<long>(begin),
                                  factors_.begin() + static_cast<long>(end)));
}

Ty Ty::pow(int n) const {
  Ty out;
  for (int i = 0; i < n; ++i) out = out + *this;
  return out;
}

std::string to_string(const Ty& t) {
  if (t.empty()) return "Ty()";
  std::string out;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += " @ ";
    out += to_string(t[i]);
  }
  return out;
}

Param Param::symbol(const std::string& name) {
  Param p;
  p.terms_[name] = 1.0;
  return p;
}

bool Param::is_bare_symbol() const {
  return constant_ == 0.0 && terms_.size() == 1 && terms_.begin()->second == 1.0;
}

double Param::value() const {
  if (!terms_.empty()) {
    throw SymbolicDiagram("parameter '" + to_string(*this) + "' has unbound symbols");
  }
  return constant_;
}

double Param::coefficient(const std::string& sym) const {
  auto it = terms_.find(sym);
  return it == terms_.end() ? 0.0 : it->second;
}

std::set<std::string> Param::free_symbols() const {
  std::set<std::string> out;
  for (const auto& [name, coeff] : terms_) out.insert(name);
  return out;
}

Param Param::substitute(const Bindings& bindings) const {
  Param out;
  out.constant_ = constant_;
  for (const auto& [name, coeff] : terms_) {
    auto it = bindings.find(name);
    if (it != bindings.end()) {
      out.constant_ += coeff * it->second;
    } else {
      out.terms_[name] = coeff;
    }
  }
  return out;
}

Param Param::operator-() const { return *this * -1.0; }

Param Param::operator+(const Param& other) const {
  Param out = *this;
  out.constant_ += other.constant_;
  for (const auto& [name, coeff] : other.terms_) {
    double c = out.terms_[name] + coeff;
    if (c == 0.0) {
      out.terms_.erase(name);
    } else {
      out.terms_[name] = c;
    }
  }
  return out;
}

Param Param::operator*(double k) const {
  Param out;
  out.constant_ = constant_ * k;
  if (k != 0.0) {
    for (const auto& [name, coeff] : terms_) out.terms_[name] = coeff * k;
  }
  return out;
}

std::string to_string(const Param& p) {
  std::ostringstream os;
  if (p.is_numeric()) {
    os << p.constant();
    return os.str();
  }
  bool first = true;
  if (p.constant() != 0.0) {
    os << p.constant();
    first = false;
  }
  for (const auto& [name, coeff] : p.terms()) {
    if (!first) os << (coeff < 0 ? " - " : " + ");
    else if (coeff < 0) os << "-";
    double a = std::abs(coeff);
    if (a != 1.0) os << a << "*";
    os << name;
    first = false;
  }
  return os.str();
}

}  // namespace photonet
