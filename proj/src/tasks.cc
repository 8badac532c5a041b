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

#include "cascade/tasks.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cascade/error.h"
#include "cascade/learner.h"
#include "cascade/parallel.h"
#include "cascade/random.h"
#include "cascade/stats.h"
#include "cascade/virality.h"

namespace cascade {
namespace {

// Indices of cascades with at least `min_size` reshares, in cascade id order.
std::vector<size_t> Retain(std::span<const Cascade> cascades, size_t min_size) {
  std::vector<size_t> kept;
  for (size_t i = 0; i < cascades.size(); ++i) {
    if (cascades[i].tree.size() >= min_size) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end(), [&](size_t a, size_t b) {
    return cascades[a].tree.id() < cascades[b].tree.id();
  });
  return kept;
}

FeatureVector Featurize(const Cascade& c, size_t k, const TaskOptions& options) {
  return ExtractFeatures(c.tree, k, options.graph,
                         c.content ? &*c.content : nullptr, options.features);
}

// Labels the retained cascades by target >= median(target).
LabeledTask LabelByMedian(std::span<const Cascade> cascades,
                          const std::vector<size_t>& retained,
                          const std::vector<double>& targets, size_t k,
                          const TaskOptions& options, std::string_view what) {
  if (retained.empty()) {
    throw Error(ErrorCode::kEmptyDataset,
                "no cascades qualify for the " + std::string(what) + " task");
  }
  LabeledTask task;
  task.retained = retained.size();
  task.threshold = Median(targets);

  std::vector<size_t> chosen(retained.size());
  std::iota(chosen.begin(), chosen.end(), size_t{0});
  std::vector<int> labels(retained.size());
  for (size_t i = 0; i < retained.size(); ++i) {
    labels[i] = targets[i] >= task.threshold ? 1 : 0;
  }

  if (options.quartiles) {
    std::vector<size_t> order = chosen;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (targets[a] != targets[b]) return targets[a] < targets[b];
      return cascades[retained[a]].tree.id() < cascades[retained[b]].tree.id();
    });
    const size_t quarter = order.size() / 4;
    if (quarter == 0) {
      throw Error(ErrorCode::kEmptyDataset,
                  "fewer than 4 cascades; quartile task is empty");
    }
    chosen.clear();
    for (size_t i = 0; i < quarter; ++i) {
      labels[order[i]] = 0;
      labels[order[order.size() - 1 - i]] = 1;
      chosen.push_back(order[i]);
      chosen.push_back(order[order.size() - 1 - i]);
    }
    std::sort(chosen.begin(), chosen.end());
  }

  task.examples.resize(chosen.size());
  ParallelFor(chosen.size(), options.threads, [&](size_t j) {
    const size_t i = chosen[j];
    const Cascade& c = cascades[retained[i]];
    LabeledExample& ex = task.examples[j];
    ex.cascade_id = c.tree.id();
    ex.features = Featurize(c, k, options);
    ex.label = labels[i];
    ex.final_size = c.tree.size();
    ex.k = k;
  });

  size_t positives = 0;
  for (const auto& ex : task.examples) positives += ex.label;
  task.positive_fraction =
      static_cast<double>(positives) / static_cast<double>(task.examples.size());

  if (retained.size() == 1) {
    task.warnings.push_back("single cascade in the " + std::string(what) +
                            " task; its label is positive by construction");
  } else if (std::all_of(targets.begin(), targets.end(),
                         [&](double t) { return t == targets.front(); })) {
    task.warnings.push_back("all " + std::string(what) +
                            " targets are equal; every label is positive");
  } else if (!options.quartiles &&
             task.positive_fraction >
                 0.5 + 1.0 / static_cast<double>(task.examples.size())) {
    task.warnings.push_back(
        "ties at the median unbalance the classes: positive fraction " +
        std::to_string(task.positive_fraction));
  }
  return task;
}

}  // namespace

double Median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "median of no values");
  const size_t n = values.size();
  const size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

LabeledTask LabelGrowth(std::span<const Cascade> cascades, size_t k,
                        const TaskOptions& options) {
  return LabelGrowthFixedR(cascades, k, k, options);
}

LabeledTask LabelGrowthFixedR(std::span<const Cascade> cascades, size_t k,
                              size_t r, const TaskOptions& options) {
  if (k == 0) throw Error(ErrorCode::kBadParams, "k must be positive");
  if (k > r) {
    throw Error(ErrorCode::kKExceedsR, "k=" + std::to_string(k) +
                                           " exceeds R=" + std::to_string(r));
  }
  const std::vector<size_t> retained = Retain(cascades, r);
  std::vector<double> sizes;
  sizes.reserve(retained.size());
  for (size_t i : retained) {
    sizes.push_back(static_cast<double>(cascades[i].tree.size()));
  }
  return LabelByMedian(cascades, retained, sizes, k, options, "growth");
}

LabeledTask LabelStructure(std::span<const Cascade> cascades, size_t k,
                           const TaskOptions& options) {
  if (k == 0) throw Error(ErrorCode::kBadParams, "k must be positive");
  const std::vector<size_t> retained = Retain(cascades, k);
  std::vector<double> wiener(retained.size());
  ParallelFor(retained.size(), options.threads, [&](size_t i) {
    wiener[i] = WienerIndex(cascades[retained[i]].tree);
  });
  return LabelByMedian(cascades, retained, wiener, k, options, "structure");
}

std::vector<ClusterInstance> BuildClusterTask(std::span<const Cascade> cascades,
                                              size_t k, size_t m, uint64_t seed,
                                              const TaskOptions& options) {
  if (k == 0 || m == 0) {
    throw Error(ErrorCode::kBadParams, "k and m must be positive");
  }
  std::map<std::string, std::vector<size_t>> clusters;
  for (size_t i : Retain(cascades, k)) {
    const auto& content = cascades[i].content;
    if (content && content->cluster_id) {
      clusters[*content->cluster_id].push_back(i);  // stays in id order
    }
  }
  std::vector<std::pair<std::string, std::vector<size_t>>> qualifying;
  for (auto& [id, members] : clusters) {
    if (members.size() >= m) qualifying.emplace_back(id, std::move(members));
  }
  if (qualifying.empty()) {
    throw Error(ErrorCode::kNoQualifyingClusters,
                "no cluster has " + std::to_string(m) +
                    " members with at least " + std::to_string(k) +
                    " reshares");
  }

  std::vector<ClusterInstance> instances(qualifying.size());
  for (size_t c = 0; c < qualifying.size(); ++c) {
    auto& [cluster_id, members] = qualifying[c];
    Rng rng(DeriveSeed(seed, c));
    rng.Shuffle(std::span<size_t>(members));
    members.resize(m);
    std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
      return cascades[a].tree.id() < cascades[b].tree.id();
    });
    ClusterInstance& instance = instances[c];
    instance.cluster_id = cluster_id;
    instance.members.resize(m);
    for (size_t j = 0; j < m; ++j) {
      const Cascade& cascade = cascades[members[j]];
      ClusterMember& member = instance.members[j];
      member.cascade_id = cascade.tree.id();
      member.final_size = cascade.tree.size();
      member.origin_time = cascade.tree.origin_time();
    }
    size_t winner = 0;
    for (size_t j = 1; j < m; ++j) {
      const ClusterMember& a = instance.members[j];
      const ClusterMember& b = instance.members[winner];
      if (a.final_size > b.final_size ||
          (a.final_size == b.final_size && a.origin_time < b.origin_time)) {
        winner = j;  // equal size and time: the earlier id already holds
      }
    }
    instance.winner_index = winner;
  }

  // Featurize the selected members.
  std::vector<std::pair<size_t, size_t>> slots;
  for (size_t c = 0; c < instances.size(); ++c) {
    for (size_t j = 0; j < m; ++j) slots.emplace_back(c, j);
  }
  ParallelFor(slots.size(), options.threads, [&](size_t s) {
    const auto [c, j] = slots[s];
    const size_t cascade_index = qualifying[c].second[j];
    instances[c].members[j].features =
        Featurize(cascades[cascade_index], k, options);
  });
  return instances;
}

std::vector<GroupSummary> GroupSummaries(std::span<const Cascade> cascades,
                                         std::string_view field) {
  auto group_of = [&](const Cascade& c) -> std::optional<std::string> {
    if (field == "root_type") {
      return std::string(NodeTypeName(c.tree.node(0).node_type));
    }
    if (!c.content) return std::nullopt;
    if (field == "category") return c.content->category;
    if (field == "cluster_id") return c.content->cluster_id;
    if (field == "is_en") return c.content->is_en ? "1" : "0";
    if (field == "has_caption") return c.content->has_caption ? "1" : "0";
    throw Error(ErrorCode::kUnknownField,
                "cannot group by '" + std::string(field) + "'");
  };

  struct Accumulator {
    size_t count = 0;
    double size_sum = 0.0;
    double wiener_sum = 0.0;
    size_t wiener_count = 0;
  };
  std::map<std::string, Accumulator> groups;
  for (const Cascade& c : cascades) {
    auto group = group_of(c);
    if (!group) continue;
    Accumulator& acc = groups[*group];
    ++acc.count;
    acc.size_sum += static_cast<double>(c.tree.size());
    if (c.tree.node_count() >= 2) {
      acc.wiener_sum += WienerIndex(c.tree);
      ++acc.wiener_count;
    }
  }
  if (groups.empty()) {
    throw Error(ErrorCode::kUnknownField,
                "field '" + std::string(field) + "' is absent on every cascade");
  }
  std::vector<GroupSummary> rows;
  for (const auto& [group, acc] : groups) {
    GroupSummary row;
    row.group = group;
    row.count = acc.count;
    row.mean_final_size = acc.size_sum / static_cast<double>(acc.count);
    row.mean_wiener = acc.wiener_count > 0
                          ? acc.wiener_sum / static_cast<double>(acc.wiener_count)
                          : std::nan("");
    rows.push_back(std::move(row));
  }
  return rows;
}

DesignMatrix ToDesignMatrix(std::span<const LabeledExample> examples) {
  DesignMatrix design;
  if (examples.empty()) return design;
  design.names = examples.front().features.EncodedNames();
  design.x = Matrix(examples.size(), design.names.size());
  for (size_t i = 0; i < examples.size(); ++i) {
    const std::vector<double> values = examples[i].features.EncodedValues();
    if (values.size() != design.names.size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "example '" + examples[i].cascade_id +
                      "' has a different feature encoding");
    }
    std::copy(values.begin(), values.end(), design.x.row(i).begin());
    design.y.push_back(examples[i].label);
    design.final_sizes.push_back(static_cast<double>(examples[i].final_size));
    design.cascade_ids.push_back(examples[i].cascade_id);
  }
  return design;
}

std::vector<FeaturePredictor> RankSingleFeaturePredictors(
    std::span<const LabeledExample> examples, int folds, uint64_t seed,
    double lambda, int threads) {
  return RankSingleFeaturePredictors(ToDesignMatrix(examples), folds, seed,
                                     lambda, threads);
}

std::vector<FeaturePredictor> RankSingleFeaturePredictors(
    const DesignMatrix& design, int folds, uint64_t seed, double lambda,
    int threads) {
  size_t positives = 0;
  for (int label : design.y) positives += label == 1;
  if (positives < 2 || design.y.size() - positives < 2) {
    throw Error(ErrorCode::kSingleClass,
                "need at least 2 examples of each class");
  }
  std::vector<double> log_size(design.final_sizes.size());
  for (size_t i = 0; i < log_size.size(); ++i) {
    log_size[i] = std::log(design.final_sizes[i]);
  }

  std::vector<std::optional<FeaturePredictor>> results(design.names.size());
  // Parallel across features; each cross-validation runs on one thread.
  ParallelFor(design.names.size(), threads, [&](size_t j) {
    const std::vector<double> column = design.x.Column(j);
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    if (*lo == *hi) return;
    const size_t col[] = {j};
    CrossValidationOptions cv;
    cv.folds = folds;
    cv.lambda = lambda;
    cv.seed = seed;
    const Metrics metrics = CrossValidate(design.x.SelectColumns(col),
                                          design.y, cv);
    FeaturePredictor predictor;
    predictor.feature = design.names[j];
    predictor.accuracy = metrics.accuracy_mean;
    try {
      predictor.pearson_log_size = Pearson(column, log_size);
    } catch (const Error&) {
      predictor.pearson_log_size = std::nan("");
    }
    results[j] = std::move(predictor);
  });

  std::vector<FeaturePredictor> ranking;
  for (auto& r : results) {
    if (r) ranking.push_back(std::move(*r));
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const FeaturePredictor& a, const FeaturePredictor& b) {
              if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
              return a.feature < b.feature;
            });
  return ranking;
}

std::vector<FeatureRow> ExtractAllFeatures(std::span<const Cascade> cascades,
                                           size_t k,
                                           const TaskOptions& options) {
  const std::vector<size_t> retained = Retain(cascades, k);
  std::vector<FeatureRow> rows(retained.size());
  ParallelFor(retained.size(), options.threads, [&](size_t i) {
    const Cascade& c = cascades[retained[i]];
    rows[i].cascade_id = c.tree.id();
    rows[i].final_size = c.tree.size();
    rows[i].features = Featurize(c, k, options);
  });
  return rows;
}

}  // namespace cascade
