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

#include <string>

#include "photonet/diagram.hpp"

namespace photonet {

/// Circuit interchange document:
///   {"dom": [types], "dom_wires": [ids], "cod": [types], "cod_wires": [ids],
///    "boxes": [{"name", "params", "attrs", "wires_in", "wires_out"}],
///    "scalars": [[re, im]], "symbols": {name: value}, "meta": {...}}
/// "dom_wires" defaults to 0..k-1 and "cod_wires" to the dangling wires in
/// order of creation.
struct CircuitFile {
  Diagram diagram;
  Bindings symbols;
  Json meta = Json::object();
};

Json diagram_to_json(const Diagram& d);
/// ParseError naming the first offending box (by index) on failure.
Diagram diagram_from_json(const Json& j);

CircuitFile parse_circuit(const Json& j);
CircuitFile load_circuit(const std::string& path);
Json serialize_circuit(const CircuitFile& c);
void save_circuit(const CircuitFile& c, const std::string& path);

/// Rebuilds one generator from its description.
Box box_from_json(const std::string& name, const Json& params, const Json& attrs, const Ty& dom, const Ty& cod);

}  // namespace photonet
