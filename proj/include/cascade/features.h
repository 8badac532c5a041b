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

// Per-observation feature extraction over the first k reshares of a cascade:
// content, root, resharer, structural and temporal feature families.

#ifndef CASCADE_FEATURES_H_
#define CASCADE_FEATURES_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/cascade_model.h"

namespace cascade {

// Precomputed content descriptors for a cascade's photo. Scores and word
// proportions lie in [0, 1].
struct ContentRecord {
  static constexpr std::array<std::string_view, 10> kScoreNames = {
      "score_closeup", "score_indoor",   "score_outdoor", "score_synthetic",
      "score_food",    "score_landmark", "score_person",  "score_nature",
      "score_water",   "score_overlaid_text"};

  std::string cascade_id;
  std::array<double, 10> scores{};
  bool is_en = false;
  bool has_caption = false;
  double liwc_pos = 0.0;
  double liwc_neg = 0.0;
  double liwc_soc = 0.0;
  std::optional<std::string> category;
  std::optional<std::string> cluster_id;

  bool operator==(const ContentRecord&) const = default;
};

struct Feature {
  std::string name;
  double value = 0.0;
  bool missing = false;
  // Whether the dense encoding carries a `<name>_missing` indicator. Fixed
  // per feature name so every row of a dataset shares one header.
  bool missable = false;

  bool operator==(const Feature&) const = default;
};

class FeatureVector {
 public:
  void Add(std::string name, double value);
  void AddOptional(std::string name, std::optional<double> value);

  std::span<const Feature> features() const { return features_; }
  size_t size() const { return features_.size(); }

  const Feature* Find(std::string_view name) const;
  // Throws kMissingFeature if the name is not part of the vector.
  const Feature& Get(std::string_view name) const;

  // Dense encoding: missing values become 0 and every missable feature gets
  // a companion `<name>_missing` column holding 0 or 1.
  std::vector<std::string> EncodedNames() const;
  std::vector<double> EncodedValues() const;

  // did_leave was derived from tree depth because no social graph was given.
  bool did_leave_approximate = false;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<Feature> features_;
};

struct FeatureOptions {
  // Replace the through-origin slopes (gap_slope, depth_slope_k) with an
  // ordinary least-squares slope around the means.
  bool centered_slopes = false;
};

// beta = sum(i * v_i) / sum(i^2), i = 1..m. Throws kEmpty.
double SlopeThroughOrigin(std::span<const double> values);
// Least-squares slope of v_i on i with intercept; 0 for a single value.
double CenteredSlope(std::span<const double> values);
// Nearest-rank 90th percentile: sorted value at rank ceil(0.9 n). Throws kEmpty.
double Percentile90(std::span<const double> values);

// Computes every feature on the root and first k reshares. Graph-dependent
// features are flagged missing when `graph` is null, content features when
// `content` is null. Throws kKTooLarge, kTimeNotNormalized, kBadParams (k=0).
FeatureVector ExtractFeatures(const CascadeTree& tree, size_t k,
                              const SocialGraph* graph,
                              const ContentRecord* content,
                              const FeatureOptions& options = {});

}  // namespace cascade

#endif  // CASCADE_FEATURES_H_
