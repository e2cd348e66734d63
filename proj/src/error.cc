// Copyright 2026 The chansynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chansynth/error.h"

namespace chansynth {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonStochastic: return "NonStochastic";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kEmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kBinBoundaryAmbiguity: return "BinBoundaryAmbiguity";
    case ErrorCode::kZeroProbabilityConditioning:
      return "ZeroProbabilityConditioning";
    case ErrorCode::kCeilingViolation: return "CeilingViolation";
    case ErrorCode::kIterationLimit: return "IterationLimit";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kMalformedBitstream: return "MalformedBitstream";
    case ErrorCode::kUnexpectedEndOfStream: return "UnexpectedEndOfStream";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kPrecondition: return "Precondition";
    case ErrorCode::kCellCountTooLarge: return "CellCountTooLarge";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace chansynth
