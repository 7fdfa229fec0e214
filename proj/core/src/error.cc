// Copyright 2026 The pqsuite Authors.
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

#include "pqsuite/error.h"

namespace pqsuite {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kCodecError: return "CodecError";
    case ErrorCode::kChannelError: return "ChannelError";
    case ErrorCode::kIdOverflow: return "IdOverflow";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kUnknownSegmentId: return "UnknownSegmentId";
    case ErrorCode::kCategoryMissing: return "CategoryMissing";
    case ErrorCode::kUnmappedCategory: return "UnmappedCategory";
    case ErrorCode::kInvalidCounts: return "InvalidCounts";
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kUndefined: return "Undefined";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kImageSetMismatch: return "ImageSetMismatch";
    case ErrorCode::kFrameTooLarge: return "FrameTooLarge";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kMissingImage: return "MissingImage";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace pqsuite
