/*
 * Copyright 2026 The Cascade Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cascade/error.h"

namespace cascade {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoRoot: return "NoRoot";
    case ErrorCode::kMultipleRoots: return "MultipleRoots";
    case ErrorCode::kDanglingParent: return "DanglingParent";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kNegativeTimestamp: return "NegativeTimestamp";
    case ErrorCode::kDuplicateNode: return "DuplicateNode";
    case ErrorCode::kTimeOrderViolation: return "TimeOrderViolation";
    case ErrorCode::kMixedCascades: return "MixedCascades";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kAlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kDegenerateSamples: return "DegenerateSamples";
    case ErrorCode::kZeroSum: return "ZeroSum";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kSampleTooSmall: return "SampleTooSmall";
    case ErrorCode::kDegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::kTimeNotNormalized: return "TimeNotNormalized";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kKExceedsR: return "KExceedsR";
    case ErrorCode::kNoQualifyingClusters: return "NoQualifyingClusters";
    case ErrorCode::kUnknownField: return "UnknownField";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kMissingFeature: return "MissingFeature";
    case ErrorCode::kTooFewExamples: return "TooFewExamples";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace cascade
