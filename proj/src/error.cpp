// Copyright 2026 The cocycle-lab Authors
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

#include "cocycle/error.hpp"

namespace cocycle {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameter: return "parameter";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kStripViolation: return "strip-violation";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kResonance: return "resonance";
    case ErrorCode::kEllipticityMargin: return "ellipticity-margin";
    case ErrorCode::kRegularity: return "regularity";
    case ErrorCode::kConsistency: return "consistency";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace cocycle
