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

#include "cascade/stats.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cascade/error.h"

namespace cascade {

double PowerLawMedian(const PowerLawSpec& spec) {
  if (!(spec.alpha > 1.0) || !std::isfinite(spec.alpha)) {
    throw Error(ErrorCode::kAlphaOutOfRange,
                "alpha must exceed 1, got " + std::to_string(spec.alpha));
  }
  if (!(spec.x_min > 0.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange,
                "x_min must be positive, got " + std::to_string(spec.x_min));
  }
  return std::pow(2.0, 1.0 / (spec.alpha - 1.0)) * spec.x_min;
}

double FitPowerLawAlpha(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) {
    throw Error(ErrorCode::kInsufficientSamples, "x_min must be positive");
  }
  size_t retained = 0;
  double log_sum = 0.0;
  for (double x : samples) {
    if (x >= x_min) {
      ++retained;
      log_sum += std::log(x / x_min);
    }
  }
  if (retained < 2) {
    throw Error(ErrorCode::kInsufficientSamples,
                "need at least 2 samples >= x_min, have " +
                    std::to_string(retained));
  }
  if (log_sum <= 0.0) {
    throw Error(ErrorCode::kDegenerateSamples, "all samples equal x_min");
  }
  return 1.0 + static_cast<double>(retained) / log_sum;
}

double Gini(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "gini of no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) {
    throw Error(ErrorCode::kZeroSum, "gini requires nonnegative values");
  }
  const double n = static_cast<double>(sorted.size());
  double total = 0.0;
  double weighted = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  if (!(total > 0.0)) throw Error(ErrorCode::kZeroSum, "values sum to zero");
  return weighted / (n * total);
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kLengthMismatch, "pearson needs at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error(ErrorCode::kZeroVariance, "pearson input has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

FisherComparison FisherZCompare(double r1, long n1, double r2, long n2) {
  if (n1 < 4 || n2 < 4) {
    throw Error(ErrorCode::kSampleTooSmall,
                "each correlation needs n >= 4");
  }
  if (!(std::abs(r1) < 1.0) || !(std::abs(r2) < 1.0)) {
    throw Error(ErrorCode::kDegenerateCorrelation,
                "correlations must satisfy |r| < 1");
  }
  const double se = std::sqrt(1.0 / static_cast<double>(n1 - 3) +
                              1.0 / static_cast<double>(n2 - 3));
  FisherComparison result;
  result.z = (std::atanh(r1) - std::atanh(r2)) / se;
  // 2 * (1 - Phi(|z|)) without cancellation.
  result.p_value = std::erfc(std::abs(result.z) / std::sqrt(2.0));
  return result;
}

}  // namespace cascade
