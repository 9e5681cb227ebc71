// Copyright 2026 The ppcs Authors
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

#include "ppcs/error.h"

#include <cstring>

namespace ppcs {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kPrecondition: return "precondition violation";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kDecode: return "decode error";
    case ErrorCode::kSchema: return "schema error";
    case ErrorCode::kInvalidName: return "invalid name";
    case ErrorCode::kMalformedKey: return "malformed key";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kIntegrity: return "integrity error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kIO: return "I/O error";
    case ErrorCode::kSortViolation: return "sort violation";
    case ErrorCode::kCapacity: return "capacity exceeded";
    case ErrorCode::kRecovery: return "recovery error";
    case ErrorCode::kUndefinedRatio: return "undefined ratio";
    case ErrorCode::kSpec: return "spec error";
    case ErrorCode::kTier: return "tier error";
    case ErrorCode::kReport: return "report error";
  }
  return "error";
}

void throw_io_error(const std::string& what, int err) {
  throw Error(ErrorCode::kIO, what + ": " + std::strerror(err));
}

}  // namespace ppcs
