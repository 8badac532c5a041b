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

// Heavy-tail and correlation statistics.

#ifndef CASCADE_STATS_H_
#define CASCADE_STATS_H_

#include <span>

namespace cascade {

// Continuous power law p(x) ~ x^-alpha on [x_min, inf).
struct PowerLawSpec {
  double alpha = 2.0;
  double x_min = 1.0;
};

// Median 2^(1/(alpha-1)) * x_min; doubles x_min at alpha = 2.
// Throws kAlphaOutOfRange unless alpha > 1 and x_min > 0.
double PowerLawMedian(const PowerLawSpec& spec);

// Continuous maximum-likelihood (Hill) tail exponent with x_min fixed.
// Samples below x_min are discarded.
double FitPowerLawAlpha(std::span<const double> samples, double x_min);

// Population Gini coefficient of nonnegative values.
double Gini(std::span<const double> values);

// Sample Pearson correlation.
double Pearson(std::span<const double> x, std::span<const double> y);

// Standard normal CDF via erfc.
double NormalCdf(double z);

struct FisherComparison {
  double z = 0.0;        // difference statistic
  double p_value = 1.0;  // two-sided
};

// Compares two independent correlations through Fisher's z = atanh(r).
FisherComparison FisherZCompare(double r1, long n1, double r2, long n2);

}  // namespace cascade

#endif  // CASCADE_STATS_H_
