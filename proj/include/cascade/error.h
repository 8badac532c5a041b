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

#ifndef CASCADE_ERROR_H_
#define CASCADE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cascade {

enum class ErrorCode {
  // cascade_model
  kNoRoot,
  kMultipleRoots,
  kDanglingParent,
  kCycleDetected,
  kNegativeTimestamp,
  kDuplicateNode,
  kTimeOrderViolation,
  kMixedCascades,
  kKTooLarge,
  // virality
  kTooSmall,
  // stats
  kAlphaOutOfRange,
  kInsufficientSamples,
  kDegenerateSamples,
  kZeroSum,
  kEmpty,
  kLengthMismatch,
  kZeroVariance,
  kSampleTooSmall,
  kDegenerateCorrelation,
  // features
  kTimeNotNormalized,
  // tasks
  kEmptyDataset,
  kKExceedsR,
  kNoQualifyingClusters,
  kUnknownField,
  // learner
  kSingleClass,
  kNonFiniteInput,
  kMissingFeature,
  kTooFewExamples,
  // synth
  kBadParams,
  // io / cli
  kParse,
  kIo,
  kConfigInvalid,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type used across the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // Message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cascade

#endif  // CASCADE_ERROR_H_
