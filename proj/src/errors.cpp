// Copyright 2026 The delaydim Authors
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

#include "delaydim/errors.hpp"

namespace delaydim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSeries: return "InvalidSeries";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NumericalError: return "NumericalError";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::DegenerateSignal: return "DegenerateSignal";
    case ErrorCode::SingularBound: return "SingularBound";
    case ErrorCode::SingularBathParameters: return "SingularBathParameters";
    case ErrorCode::DivergedIntegration: return "DivergedIntegration";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::IntegrationError: return "IntegrationError";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::NonuniformTime: return "NonuniformTime";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace delaydim
