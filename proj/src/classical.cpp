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

#include <atomic>
#include <numeric>

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

namespace {

using Out = std::optional<std::vector<int>>;

BoundFn constant_bounds(std::vector<int> b) {
  return [b = std::move(b)](std::span<const int>) { return b; };
}

Diagram make(std::string name, Ty dom, Ty cod, ClassicalFn fn, BoundFn bounds, Json attrs = Json::object()) {
  return Diagram::from_box(std::make_shared<ClassicalBox>(std::move(name), std::move(dom), std::move(cod),
                                                          std::move(attrs), std::move(fn), std::move(bounds)));
}

}  // namespace

ClassicalBox::ClassicalBox(std::string name, Ty dom, Ty cod, Json attrs, ClassicalFn fn, BoundFn bounds)
    : BoxImpl(std::move(name), std::move(dom), std::move(cod)),
      attrs_(std::move(attrs)),
      fn_(std::move(fn)),
      bounds_(std::move(bounds)) {
  for (auto t : this->dom()) {
    if (!is_classical(t)) throw TypeMismatch(this->name() + ": classical functions take bit/mode inputs");
  }
  for (auto t : this->cod()) {
    if (!is_classical(t)) throw TypeMismatch(this->name() + ": classical functions produce bit/mode outputs");
  }
}

std::vector<BasisTransition> ClassicalBox::transitions(std::span<const int> in, std::span<const int> out_caps) const {
  auto r = fn_(in);
  if (!r) return {};
  for (size_t i = 0; i < r->size(); ++i) {
    if ((*r)[i] < 0 || (*r)[i] >= out_caps[i]) return {};
  }
  return {{std::move(*r), 1.0}};
}

Diagram Not() {
  return make("Not", bit, bit, [](std::span<const int> in) -> Out { return std::vector<int>{1 - in[0]}; },
              constant_bounds({1}));
}

Diagram Xor() {
  return make("Xor", bit.pow(2), bit, [](std::span<const int> in) -> Out { return std::vector<int>{in[0] ^ in[1]}; },
              constant_bounds({1}));
}

Diagram And() {
  return make("And", bit.pow(2), bit, [](std::span<const int> in) -> Out { return std::vector<int>{in[0] & in[1]}; },
              constant_bounds({1}));
}

Diagram Or() {
  return make("Or", bit.pow(2), bit, [](std::span<const int> in) -> Out { return std::vector<int>{in[0] | in[1]}; },
              constant_bounds({1}));
}

Diagram Add(int k) {
  if (k < 1) throw RangeError("Add needs at least one input");
  return make(
      "Add", mode.pow(k), mode,
      [](std::span<const int> in) -> Out { return std::vector<int>{std::accumulate(in.begin(), in.end(), 0)}; },
      [](std::span<const int> in) {
        int s = 0;
        for (int x : in) s = sat_add(s, x);
        return std::vector<int>{s};
      },
      Json{{"k", k}});
}

Diagram Sub() {
  return make(
      "Sub", mode.pow(2), mode,
      [](std::span<const int> in) -> Out {
        if (in[0] < in[1]) return std::nullopt;
        return std::vector<int>{in[0] - in[1]};
      },
      [](std::span<const int> in) { return std::vector<int>{in[0]}; });
}

Diagram Multiply() {
  return make(
      "Multiply", mode.pow(2), mode, [](std::span<const int> in) -> Out { return std::vector<int>{in[0] * in[1]}; },
      [](std::span<const int> in) { return std::vector<int>{sat_mul(in[0], in[1])}; });
}

Diagram Divide() {
  auto warned = std::make_shared<std::atomic<bool>>(false);
  return make(
      "Divide", mode.pow(2), mode,
      [warned](std::span<const int> in) -> Out {
        if (in[1] == 0) {
          if (!warned->exchange(true)) warn("Divide: division by zero has amplitude 0");
          return std::nullopt;
        }
        return std::vector<int>{in[0] / in[1]};
      },
      [](std::span<const int> in) { return std::vector<int>{in[0]}; });
}

Diagram Mod2() {
  return make("Mod2", mode, bit, [](std::span<const int> in) -> Out { return std::vector<int>{in[0] % 2}; },
              constant_bounds({1}));
}

Diagram PostselectBit(int b) {
  if (b != 0 && b != 1) throw RangeError("PostselectBit expects 0 or 1");
  return make(
      "PostselectBit", bit, Ty(),
      [b](std::span<const int> in) -> Out {
        if (in[0] != b) return std::nullopt;
        return std::vector<int>{};
      },
      constant_bounds({}), Json{{"bit", b}});
}

Diagram BinaryMatrix(std::vector<std::vector<int>> matrix) {
  const size_t rows = matrix.size();
  const size_t cols = rows ? matrix.front().size() : 0;
  for (const auto& r : matrix) {
    if (r.size() != cols) throw ShapeMismatch("BinaryMatrix rows differ in length");
    for (int v : r) {
      if (v != 0 && v != 1) throw RangeError("BinaryMatrix entries must be 0 or 1");
    }
  }
  Json attrs = {{"matrix", matrix}};
  return make(
      "BinaryMatrix", bit.pow(static_cast<int>(cols)), bit.pow(static_cast<int>(rows)),
      [matrix](std::span<const int> in) -> Out {
        std::vector<int> out;
        for (const auto& r : matrix) {
          int v = 0;
          for (size_t c = 0; c < r.size(); ++c) v ^= r[c] & in[c];
          out.push_back(v);
        }
        return out;
      },
      constant_bounds(std::vector<int>(rows, 1)), attrs);
}

Diagram ClassicalFunction(const Ty& dom, const Ty& cod, std::vector<int> dom_caps,
                          std::map<std::vector<int>, std::vector<int>> table) {
  if (dom_caps.size() != dom.size()) throw ShapeMismatch("ClassicalFunction: one cap per input wire");
  for (size_t i = 0; i < dom.size(); ++i) {
    if (is_two_level(dom[i]) && dom_caps[i] > 2) throw RangeError("bit inputs have cap 2");
  }
  std::vector<int> out_max(cod.size(), 0);
  for_each_index(dom_caps, [&](std::span<const int> in) {
    auto it = table.find(std::vector<int>(in.begin(), in.end()));
    if (it == table.end()) {
      std::string key;
      for (int v : in) key += (key.empty() ? "" : ",") + std::to_string(v);
      throw TableIncomplete("ClassicalFunction table has no entry for input (" + key + ")");
    }
    if (it->second.size() != cod.size()) throw ShapeMismatch("ClassicalFunction output of wrong length");
    for (size_t j = 0; j < cod.size(); ++j) {
      if (is_two_level(cod[j]) && it->second[j] > 1) throw RangeError("bit outputs must be 0 or 1");
      out_max[j] = std::max(out_max[j], it->second[j]);
    }
  });
  Json rows = Json::array();
  for (const auto& [k, v] : table) rows.push_back(Json::array({k, v}));
  Json attrs = {{"dom_caps", dom_caps}, {"table", rows}};
  // Truncation inference must not offer inputs outside the table.
  std::vector<int> in_bounds;
  for (int c : dom_caps) in_bounds.push_back(c - 1);
  class TableBox final : public BoxImpl {
   public:
    TableBox(Ty dom, Ty cod, Json attrs, std::map<std::vector<int>, std::vector<int>> table, std::vector<int> out_max,
             std::vector<int> in_bounds)
        : BoxImpl("ClassicalFunction", std::move(dom), std::move(cod)),
          attrs_(std::move(attrs)),
          table_(std::move(table)),
          out_max_(std::move(out_max)),
          in_bounds_(std::move(in_bounds)) {}
    Json attrs() const override { return attrs_; }
    std::vector<BasisTransition> transitions(std::span<const int> in, std::span<const int> out_caps) const override {
      auto it = table_.find(std::vector<int>(in.begin(), in.end()));
      if (it == table_.end()) throw TableIncomplete("ClassicalFunction evaluated outside its table");
      for (size_t j = 0; j < out_caps.size(); ++j) {
        if (it->second[j] >= out_caps[j]) return {};
      }
      return {{it->second, 1.0}};
    }
    std::vector<int> forward_bounds(std::span<const int>) const override { return out_max_; }
    std::vector<int> backward_bounds(std::span<const int>) const override { return in_bounds_; }
    Box conjugate() const override { return self(); }

   private:
    Json attrs_;
    std::map<std::vector<int>, std::vector<int>> table_;
    std::vector<int> out_max_;
    std::vector<int> in_bounds_;
  };
  return Diagram::from_box(std::make_shared<TableBox>(dom, cod, attrs, std::move(table), out_max, in_bounds));
}

}  // namespace photonet
