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

#include "photonet/streams.hpp"

#include "photonet/errors.hpp"
#include "photonet/generators.hpp"

namespace photonet {

Stream feedback(const Diagram& body, const Ty& dom, const Ty& cod, const Ty& mem, const Diagram& initial_state) {
  if (body.dom() != mem + dom) {
    throw TypeMismatch("feedback body domain " + to_string(body.dom()) + " is not mem (x) dom = " + to_string(mem + dom));
  }
  if (body.cod() != mem + cod) {
    throw TypeMismatch("feedback body codomain " + to_string(body.cod()) + " is not mem (x) cod = " + to_string(mem + cod));
  }
  if (!initial_state.dom().empty() || initial_state.cod() != mem) {
    throw TypeMismatch("initial state " + to_string(initial_state.dom()) + " -> " + to_string(initial_state.cod()) +
                       " is not a state on " + to_string(mem));
  }
  return Stream{body, mem, dom, cod, initial_state};
}

Stream delay(const Ty& ty, const Diagram& initial_state) {
  return feedback(Swap(ty, ty), ty, ty, ty, initial_state);
}

Stream then(const Stream& a, const Stream& b) {
  if (a.cod != b.dom) throw TypeMismatch("stream codomain " + to_string(a.cod) + " does not match " + to_string(b.dom));
  const size_t ma = a.mem.size(), mb = b.mem.size();
  Diagram body = build_named(a.mem + b.mem + a.dom, [&](Builder& bl, const std::vector<Wire>& in) {
    std::vector<Wire> first(in.begin(), in.begin() + static_cast<long>(ma));
    first.insert(first.end(), in.begin() + static_cast<long>(ma + mb), in.end());
    auto r1 = bl.apply(a.body, first);
    std::vector<Wire> second(in.begin() + static_cast<long>(ma), in.begin() + static_cast<long>(ma + mb));
    second.insert(second.end(), r1.begin() + static_cast<long>(ma), r1.end());
    auto r2 = bl.apply(b.body, second);
    std::vector<Wire> out(r1.begin(), r1.begin() + static_cast<long>(ma));
    out.insert(out.end(), r2.begin(), r2.end());
    return out;
  });
  return feedback(body, a.dom, b.cod, a.mem + b.mem, a.initial_state * b.initial_state);
}

Stream delay_by(const Ty& ty, const Diagram& initial_state, int d) {
  if (d < 1) throw RangeError("delay_by needs d >= 1");
  Stream s = delay(ty, initial_state);
  for (int k = 1; k < d; ++k) s = then(s, delay(ty, initial_state));
  return s;
}

Diagram unroll(const Stream& s, int n) {
  if (n < 1) throw RangeError("unroll needs n >= 1");
  const size_t m = s.mem.size(), k = s.dom.size();
  return build_named(s.dom.pow(n), [&](Builder& b, const std::vector<Wire>& in) {
    auto mem = b.apply(s.initial_state, std::span<const Wire>{});
    std::vector<Wire> outs;
    for (int t = 0; t < n; ++t) {
      std::vector<Wire> args = mem;
      args.insert(args.end(), in.begin() + static_cast<long>(t * k), in.begin() + static_cast<long>((t + 1) * k));
      auto r = b.apply(s.body, args);
      mem.assign(r.begin(), r.begin() + static_cast<long>(m));
      outs.insert(outs.end(), r.begin() + static_cast<long>(m), r.end());
    }
    outs.insert(outs.end(), mem.begin(), mem.end());
    return outs;
  });
}

Diagram delay_unrolled(const Ty& ty, const Diagram& initial_state, int n) {
  if (n < 1) throw RangeError("unroll needs n >= 1");
  if (!initial_state.dom().empty() || initial_state.cod() != ty) throw TypeMismatch("seed is not a state on " + to_string(ty));
  return build_named(ty.pow(n), [&](Builder& b, const std::vector<Wire>& in) {
    auto outs = b.apply(initial_state, std::span<const Wire>{});
    outs.insert(outs.end(), in.begin(), in.end());
    return outs;
  });
}

}  // namespace photonet
