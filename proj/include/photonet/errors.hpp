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

#include <functional>
#include <stdexcept>
#include <string>

namespace photonet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PHOTONET_DEFINE_ERROR(Name)     \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

PHOTONET_DEFINE_ERROR(TypeMismatch)
PHOTONET_DEFINE_ERROR(DaggerUndefined)
PHOTONET_DEFINE_ERROR(EmptySum)
PHOTONET_DEFINE_ERROR(UnknownSymbol)
PHOTONET_DEFINE_ERROR(WireReuse)
PHOTONET_DEFINE_ERROR(WireDropped)
PHOTONET_DEFINE_ERROR(NormError)
PHOTONET_DEFINE_ERROR(TableIncomplete)
PHOTONET_DEFINE_ERROR(RangeError)
PHOTONET_DEFINE_ERROR(DimensionMismatch)
PHOTONET_DEFINE_ERROR(MissingInternalState)
PHOTONET_DEFINE_ERROR(InflationUnsupported)
PHOTONET_DEFINE_ERROR(SymbolicDiagram)
PHOTONET_DEFINE_ERROR(BackendIneligible)
PHOTONET_DEFINE_ERROR(ShapeMismatch)
PHOTONET_DEFINE_ERROR(NotAState)
PHOTONET_DEFINE_ERROR(NotPure)
PHOTONET_DEFINE_ERROR(CapOverflow)
PHOTONET_DEFINE_ERROR(TooLarge)
PHOTONET_DEFINE_ERROR(NotSquare)
PHOTONET_DEFINE_ERROR(PhotonNumberMismatch)
PHOTONET_DEFINE_ERROR(TooManyOutcomes)
PHOTONET_DEFINE_ERROR(ParseError)
PHOTONET_DEFINE_ERROR(NoDerivative)

#undef PHOTONET_DEFINE_ERROR

/// Receives non-fatal diagnostics (unknown symbols, division by zero in
/// classical arithmetic). Defaults to stderr.
using WarningHandler = std::function<void(const std::string&)>;

void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace photonet
