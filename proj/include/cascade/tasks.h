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

// Balanced prediction datasets built from a cascade collection: growth and
// structure labels, same-content cluster ranking instances, per-group
// summaries and single-feature predictor rankings.

#ifndef CASCADE_TASKS_H_
#define CASCADE_TASKS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/cascade_model.h"
#include "cascade/features.h"
#include "cascade/matrix.h"

namespace cascade {

struct Cascade {
  CascadeTree tree;
  std::optional<ContentRecord> content;
};

struct LabeledExample {
  std::string cascade_id;
  FeatureVector features;
  int label = 0;
  size_t final_size = 0;
  size_t k = 0;
};

struct TaskOptions {
  const SocialGraph* graph = nullptr;
  FeatureOptions features;
  // Keep only the bottom and top quarter (by target, then cascade id);
  // classes are then exactly balanced.
  bool quartiles = false;
  int threads = 1;
};

struct LabeledTask {
  std::vector<LabeledExample> examples;  // sorted by cascade id
  double threshold = 0.0;  // median target over the retained population
  size_t retained = 0;     // cascades eligible before any quartile cut
  double positive_fraction = 0.0;
  std::vector<std::string> warnings;
};

// Median size f(k) over cascades with at least k reshares; label is
// final size >= f(k). Throws kEmptyDataset.
LabeledTask LabelGrowth(std::span<const Cascade> cascades, size_t k,
                        const TaskOptions& options = {});

// Population restricted to cascades with at least R reshares; features still
// observe the first k. Throws kKExceedsR, kEmptyDataset.
LabeledTask LabelGrowthFixedR(std::span<const Cascade> cascades, size_t k,
                              size_t r, const TaskOptions& options = {});

// Label is final Wiener index >= median Wiener index. Throws kEmptyDataset.
LabeledTask LabelStructure(std::span<const Cascade> cascades, size_t k,
                           const TaskOptions& options = {});

// Median with the midpoint of the central pair for even counts. Throws kEmpty.
double Median(std::vector<double> values);

struct ClusterMember {
  std::string cascade_id;
  FeatureVector features;
  size_t final_size = 0;
  double origin_time = 0.0;
};

struct ClusterInstance {
  std::string cluster_id;
  std::vector<ClusterMember> members;  // sorted by cascade id
  size_t winner_index = 0;
};

// One instance per cluster with at least m members of size >= k; m members
// sampled without replacement. Winner: largest final size, then earlier
// origin time, then smaller cascade id. Throws kNoQualifyingClusters.
std::vector<ClusterInstance> BuildClusterTask(
    std::span<const Cascade> cascades, size_t k, size_t m, uint64_t seed,
    const TaskOptions& options = {});

struct GroupSummary {
  std::string group;
  size_t count = 0;
  double mean_final_size = 0.0;
  double mean_wiener = 0.0;  // over members with at least two nodes
};

// Grouping fields: category, cluster_id, root_type, is_en, has_caption.
// Rows ordered by group name. Throws kUnknownField.
std::vector<GroupSummary> GroupSummaries(std::span<const Cascade> cascades,
                                         std::string_view field);

struct FeaturePredictor {
  std::string feature;
  double accuracy = 0.0;
  double pearson_log_size = 0.0;  // NaN when undefined
};

// Cross-validates the learner on each encoded feature alone. Zero-variance
// columns are skipped. Sorted by accuracy descending, then name.
// Throws kSingleClass unless both classes have at least 2 examples.
std::vector<FeaturePredictor> RankSingleFeaturePredictors(
    std::span<const LabeledExample> examples, int folds, uint64_t seed,
    double lambda = 0.01, int threads = 1);

// Dense design matrix over the encoded features of the examples, which must
// share one encoding.
struct DesignMatrix {
  std::vector<std::string> names;
  Matrix x;
  std::vector<int> y;
  std::vector<double> final_sizes;
  std::vector<std::string> cascade_ids;
};

DesignMatrix ToDesignMatrix(std::span<const LabeledExample> examples);

std::vector<FeaturePredictor> RankSingleFeaturePredictors(
    const DesignMatrix& design, int folds, uint64_t seed,
    double lambda = 0.01, int threads = 1);

struct FeatureRow {
  std::string cascade_id;
  size_t final_size = 0;
  FeatureVector features;
};

// Features at k for every cascade with at least k reshares, in cascade id
// order.
std::vector<FeatureRow> ExtractAllFeatures(std::span<const Cascade> cascades,
                                           size_t k,
                                           const TaskOptions& options = {});

}  // namespace cascade

#endif  // CASCADE_TASKS_H_
