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

#include "photonet/diagram.hpp"

namespace photonet {

/// Time-invariant stream: the same one-step map mem (x) dom -> mem (x) cod
/// every tick, seeded by `initial_state`.
struct Stream {
  Diagram body;
  Ty mem;
  Ty dom;
  Ty cod;
  Diagram initial_state;
};

Stream feedback(const Diagram& body, const Ty& dom, const Ty& cod, const Ty& mem, const Diagram& initial_state);

/// Unit delay: the feedback of a swap.
Stream delay(const Ty& ty, const Diagram& initial_state);

/// Runs `a` then feeds its outputs into `b`; memory is mem(a) (x) mem(b).
Stream then(const Stream& a, const Stream& b);

/// d composed unit delays.
Stream delay_by(const Ty& ty, const Diagram& initial_state, int d);

/// n steps as one diagram: dom^n -> cod^n (x) mem. The final memory is
/// left open.
Diagram unroll(const Stream& s, int n);

/// The unrolled unit delay written out directly: outputs (seed, x_0 ..
/// x_{n-2}) followed by x_{n-1} as the final memory.
Diagram delay_unrolled(const Ty& ty, const Diagram& initial_state, int n);

}  // namespace photonet
