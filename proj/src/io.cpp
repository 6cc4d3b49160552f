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

#include "photonet/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "photonet/channels.hpp"
#include "photonet/errors.hpp"
#include "photonet/generators.hpp"
#include "photonet/vqe.hpp"

namespace photonet {

namespace {

Box only_box(const Diagram& d) { return d.nodes().front().box; }

Json ty_json(const Ty& ty) {
  Json out = Json::array();
  for (auto t : ty) out.push_back(to_string(t));
  return out;
}

Ty ty_from_json(const Json& j) {
  std::vector<WireType> out;
  for (const auto& s : j) out.push_back(wire_type_from_string(s.get<std::string>()));
  return Ty(std::move(out));
}

std::vector<InternalState> states_from_json(const Json& attrs) {
  std::vector<InternalState> out;
  if (!attrs.contains("internal_states")) return out;
  for (const auto& s : attrs.at("internal_states")) {
    InternalState v;
    for (const auto& z : s) {
      if (z.is_array()) {
        v.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
      } else {
        v.emplace_back(z.get<double>(), 0.0);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

const std::set<std::string>& known_composites() {
  static const std::set<std::string> names = {"PhaseShiftDR", "ZMeasurementDR", "XMeasurementDR",
                                              "ThresholdMeasurement", "FusionTypeII", "FusionTypeI"};
  return names;
}

Param param_at(const std::vector<Param>& ps, size_t i, const std::string& name) {
  if (i >= ps.size()) throw ParseError(name + " expects at least " + std::to_string(i + 1) + " parameters");
  return ps[i];
}

}  // namespace

Box box_from_json(const std::string& name, const Json& params_json, const Json& attrs, const Ty& dom, const Ty& cod) {
  if (attrs.contains("dagger") && attrs.at("dagger").is_object()) {
    const Json& in = attrs.at("dagger");
    return box_from_json(in.at("name"), in.value("params", Json::array()), in.value("attrs", Json::object()),
                         ty_from_json(in.value("dom", Json::array())), ty_from_json(in.value("cod", Json::array())))
        ->dagger();
  }
  if (attrs.contains("conjugate") && attrs.at("conjugate").is_object()) {
    const Json& in = attrs.at("conjugate");
    return box_from_json(in.at("name"), in.value("params", Json::array()), in.value("attrs", Json::object()),
                         ty_from_json(in.value("dom", Json::array())), ty_from_json(in.value("cod", Json::array())))
        ->conjugate();
  }
  std::vector<Param> ps;
  for (const auto& p : params_json) ps.push_back(param_from_json(p));
  const bool dag = attrs.value("dagger", false);
  const bool conj = attrs.value("conjugate", false);
  auto flags = [&](Box b) {
    if (conj) b = b->conjugate();
    if (dag) b = b->dagger();
    return b;
  };
  auto type_attr = [&] { return wire_type_from_string(attrs.value("type", std::string("qubit"))); };

  if (name == "Z" || name == "X") {
    return std::make_shared<SpiderBox>(name == "Z" ? SpiderColor::Z : SpiderColor::X, attrs.at("n_in").get<int>(),
                                       attrs.at("n_out").get<int>(), param_at(ps, 0, name), type_attr());
  }
  if (name == "H") return only_box(H());
  if (name == "Ket" || name == "Bra") {
    const auto bits = attrs.at("bits").get<std::vector<int>>();
    const bool classical = type_attr() == WireType::bit;
    if (name == "Ket") return only_box(classical ? BitKet(bits) : Ket(bits));
    return only_box(classical ? BitBra(bits) : Bra(bits));
  }
  if (name == "Copy") return std::make_shared<CopyBox>(type_attr(), attrs.at("n_in"), attrs.at("n_out"));
  if (name == "W" || name == "WMerge") {
    return std::make_shared<WBox>(attrs.at("n").get<int>(), name == "WMerge",
                                  wire_type_from_string(attrs.value("type", std::string("qmode"))));
  }
  if (name == "Create") return std::make_shared<CreateBox>(attrs.at("occupations").get<std::vector<int>>(), states_from_json(attrs));
  if (name == "Select") return std::make_shared<SelectBox>(attrs.at("occupations").get<std::vector<int>>());
  if (name == "NumOp") return only_box(NumOp());
  static const std::map<std::string, LOKind> lo = {{"Phase", LOKind::Phase}, {"TBS", LOKind::TBS},
                                                   {"BBS", LOKind::BBS},     {"BS", LOKind::BS},
                                                   {"MZI", LOKind::MZI},     {"HadamardBS", LOKind::HBS}};
  if (auto it = lo.find(name); it != lo.end()) return std::make_shared<LOGateBox>(it->second, ps, dag, conj);
  if (name == "DualRail") return std::make_shared<DualRailBox>(attrs.at("n").get<int>(), states_from_json(attrs));
  if (attrs.contains("quantum") && !attrs.contains("kraus")) {
    const Ty q = ty_from_json(attrs.at("quantum"));
    bool measure = true;
    for (auto t : dom) measure = measure && is_quantum(t);
    if (dom.empty()) measure = false;
    const bool plain = name == "Measure" || name == "Encode";
    return std::make_shared<MeasureBox>(measure ? MeasureKind::measure : MeasureKind::encode, q, plain ? "" : name);
  }
  // Classical gates.
  if (name == "Not") return only_box(Not());
  if (name == "Xor") return only_box(Xor());
  if (name == "And") return only_box(And());
  if (name == "Or") return only_box(Or());
  if (name == "Add") return only_box(Add(attrs.at("k").get<int>()));
  if (name == "Sub") return only_box(Sub());
  if (name == "Multiply") return only_box(Multiply());
  if (name == "Divide") return only_box(Divide());
  if (name == "Mod2") return only_box(Mod2());
  if (name == "PostselectBit") return only_box(PostselectBit(attrs.at("bit").get<int>()));
  if (name == "BinaryMatrix") return only_box(BinaryMatrix(attrs.at("matrix").get<std::vector<std::vector<int>>>()));
  if (name == "ClassicalFunction") {
    std::map<std::vector<int>, std::vector<int>> table;
    for (const auto& row : attrs.at("table")) table[row.at(0).get<std::vector<int>>()] = row.at(1).get<std::vector<int>>();
    return only_box(ClassicalFunction(dom, cod, attrs.at("dom_caps").get<std::vector<int>>(), std::move(table)));
  }
  if (attrs.contains("body") && !known_composites().contains(name)) {
    return std::make_shared<BitControlledGateBox>(diagram_from_json(attrs.at("body")), name);
  }
  if (name == "PhaseShiftDR") return flags(only_box(PhaseShiftDR(param_at(ps, 0, name))));
  if (name == "ZMeasurementDR") return flags(only_box(ZMeasurementDR()));
  if (name == "XMeasurementDR") return flags(only_box(XMeasurementDR()));
  if (name == "ThresholdMeasurement") return flags(only_box(ThresholdMeasurement(attrs.at("n").get<int>())));
  if (name == "FusionTypeII") return flags(only_box(FusionTypeII()));
  if (name == "FusionTypeI") return flags(only_box(FusionTypeI()));
  // Channels.
  if (name == "Discard") return only_box(Discard(dom));
  if (name == "PhotonLoss") return only_box(PhotonLoss(param_at(ps, 0, name).value()));
  if (name == "BitFlip") return only_box(BitFlip(param_at(ps, 0, name).value()));
  if (name == "Dephasing") return only_box(Dephasing(param_at(ps, 0, name).value()));
  if (name == "a^dagger" && attrs.contains("kraus")) return only_box(creation_op());
  if (name == "a" && attrs.contains("kraus")) return only_box(annihilation_op());
  if (attrs.contains("kraus")) {
    Json rest = attrs;
    rest.erase("kraus");
    rest.erase("n_env");
    return std::make_shared<ChannelBox>(name, diagram_from_json(attrs.at("kraus")), attrs.value("n_env", 0), ps, rest);
  }
  throw ParseError("unknown box '" + name + "'");
}

Json diagram_to_json(const Diagram& d) {
  // Wires are renumbered: domain first, then box outputs in order.
  std::map<int, int> id;
  for (int w : d.dom_wires()) id.emplace(w, static_cast<int>(id.size()));
  for (const auto& node : d.nodes()) {
    for (int w : node.outs) id.emplace(w, static_cast<int>(id.size()));
  }
  auto renum = [&](const std::vector<int>& ws) {
    std::vector<int> out;
    for (int w : ws) out.push_back(id.at(w));
    return out;
  };
  Json boxes = Json::array();
  for (const auto& node : d.nodes()) {
    Json params = Json::array();
    for (const auto& p : node.box->params()) params.push_back(param_to_json(p));
    Json b = {{"name", node.box->name()},
              {"params", params},
              {"attrs", node.box->attrs()},
              {"dom", ty_json(node.box->dom())},
              {"cod", ty_json(node.box->cod())},
              {"wires_in", renum(node.ins)},
              {"wires_out", renum(node.outs)}};
    if (auto* c = dynamic_cast<const CompositeBox*>(node.box.get()); c && !known_composites().contains(c->name())) {
      b["body"] = diagram_to_json(*c->expand());
    }
    boxes.push_back(std::move(b));
  }
  Json j = {{"dom", ty_json(d.dom())},
            {"dom_wires", renum(d.dom_wires())},
            {"cod", ty_json(d.cod())},
            {"cod_wires", renum(d.cod_wires())},
            {"boxes", boxes}};
  if (!d.scalars().empty()) {
    Json s = Json::array();
    for (auto z : d.scalars()) s.push_back(Json::array({z.real(), z.imag()}));
    j["scalars"] = s;
  }
  return j;
}

Diagram diagram_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("circuit must be a JSON object");
  Ty dom;
  try {
    dom = ty_from_json(j.value("dom", Json::array()));
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad domain: ") + e.what());
  }
  Builder b(dom);
  std::map<int, Wire> wires;
  std::vector<int> created;
  std::vector<int> dom_ids;
  if (j.contains("dom_wires")) {
    dom_ids = j.at("dom_wires").get<std::vector<int>>();
    if (dom_ids.size() != dom.size()) throw ParseError("dom_wires has " + std::to_string(dom_ids.size()) + " ids for " + std::to_string(dom.size()) + " wires");
  } else {
    for (size_t i = 0; i < dom.size(); ++i) dom_ids.push_back(static_cast<int>(i));
  }
  for (size_t i = 0; i < dom_ids.size(); ++i) {
    if (!wires.emplace(dom_ids[i], b.inputs()[i]).second) throw ParseError("duplicate domain wire id " + std::to_string(dom_ids[i]));
    created.push_back(dom_ids[i]);
  }
  std::set<int> consumed;
  const Json boxes = j.value("boxes", Json::array());
  for (size_t i = 0; i < boxes.size(); ++i) {
    const Json& e = boxes[i];
    const std::string where = "box " + std::to_string(i);
    try {
      const std::string name = e.at("name").get<std::string>();
      const Json attrs = e.value("attrs", Json::object());
      const Ty bdom = ty_from_json(e.value("dom", Json::array()));
      const Ty bcod = ty_from_json(e.value("cod", Json::array()));
      Box box;
      if (e.contains("body")) {
        std::vector<Param> ps;
        for (const auto& p : e.value("params", Json::array())) ps.push_back(param_from_json(p));
        box = std::make_shared<CompositeBox>(name, diagram_from_json(e.at("body")), ps, attrs);
      } else {
        box = box_from_json(name, e.value("params", Json::array()), attrs, bdom, bcod);
      }
      if (e.contains("dom") && box->dom() != bdom) throw TypeMismatch("declared domain " + to_string(bdom) + " but '" + name + "' has " + to_string(box->dom()));
      if (e.contains("cod") && box->cod() != bcod) throw TypeMismatch("declared codomain " + to_string(bcod) + " but '" + name + "' has " + to_string(box->cod()));
      std::vector<Wire> ins;
      for (int id : e.value("wires_in", Json::array()).get<std::vector<int>>()) {
        auto it = wires.find(id);
        if (it == wires.end()) throw ParseError("wire " + std::to_string(id) + " is not defined");
        if (!consumed.insert(id).second) throw WireReuse("wire " + std::to_string(id) + " consumed twice");
        ins.push_back(it->second);
      }
      auto outs = b.apply(box, ins);
      auto out_ids = e.value("wires_out", Json::array()).get<std::vector<int>>();
      if (out_ids.size() != outs.size()) {
        throw ParseError("'" + name + "' has " + std::to_string(outs.size()) + " outputs, wires_out lists " + std::to_string(out_ids.size()));
      }
      for (size_t k = 0; k < outs.size(); ++k) {
        if (!wires.emplace(out_ids[k], outs[k]).second) throw ParseError("wire id " + std::to_string(out_ids[k]) + " defined twice");
        created.push_back(out_ids[k]);
      }
    } catch (const ParseError& err) {
      throw ParseError(where + ": " + err.what());
    } catch (const std::exception& err) {
      throw ParseError(where + ": " + err.what());
    }
  }
  for (const auto& s : j.value("scalars", Json::array())) {
    b.scalar(s.is_array() ? Complex(s.at(0).get<double>(), s.at(1).get<double>()) : Complex(s.get<double>(), 0.0));
  }
  std::vector<Wire> outs;
  if (j.contains("cod_wires")) {
    for (int id : j.at("cod_wires").get<std::vector<int>>()) {
      auto it = wires.find(id);
      if (it == wires.end()) throw ParseError("codomain wire " + std::to_string(id) + " is not defined");
      outs.push_back(it->second);
    }
  } else {
    for (int id : created) {
      if (!consumed.contains(id)) outs.push_back(wires.at(id));
    }
  }
  Diagram d;
  try {
    d = b.finish(outs);
  } catch (const std::exception& err) {
    throw ParseError(std::string("codomain: ") + err.what());
  }
  if (j.contains("cod") && ty_from_json(j.at("cod")) != d.cod()) {
    throw ParseError("declared codomain " + to_string(ty_from_json(j.at("cod"))) + " but the wires give " + to_string(d.cod()));
  }
  return d;
}

CircuitFile parse_circuit(const Json& j) {
  CircuitFile c;
  c.diagram = diagram_from_json(j);
  const Json symbols = j.value("symbols", Json::object());
  if (!symbols.is_object()) throw ParseError("symbols must be an object of name: value pairs");
  for (const auto& [k, v] : symbols.items()) {
    if (!v.is_number()) throw ParseError("symbol '" + k + "' must be bound to a number");
    c.symbols[k] = v.get<double>();
  }
  c.meta = j.value("meta", Json::object());
  return c;
}

CircuitFile load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_circuit(j);
}

Json serialize_circuit(const CircuitFile& c) {
  Json j = diagram_to_json(c.diagram);
  Json s = Json::object();
  for (const auto& [k, v] : c.symbols) s[k] = v;
  j["symbols"] = s;
  j["meta"] = c.meta;
  return j;
}

void save_circuit(const CircuitFile& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << serialize_circuit(c).dump(2) << "\n";
}

}  // namespace photonet
