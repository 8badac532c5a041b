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

#include "cascade/features.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cascade/error.h"

namespace cascade {

void FeatureVector::Add(std::string name, double value) {
  features_.push_back({std::move(name), value, false, false});
}

void FeatureVector::AddOptional(std::string name, std::optional<double> value) {
  if (value && std::isfinite(*value)) {
    features_.push_back({std::move(name), *value, false, true});
  } else {
    features_.push_back({std::move(name), 0.0, true, true});
  }
}

const Feature* FeatureVector::Find(std::string_view name) const {
  for (const Feature& f : features_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const Feature& FeatureVector::Get(std::string_view name) const {
  const Feature* f = Find(name);
  if (f == nullptr) {
    throw Error(ErrorCode::kMissingFeature,
                "no feature named '" + std::string(name) + "'");
  }
  return *f;
}

std::vector<std::string> FeatureVector::EncodedNames() const {
  std::vector<std::string> names;
  names.reserve(features_.size() * 2);
  for (const Feature& f : features_) {
    names.push_back(f.name);
    if (f.missable) names.push_back(f.name + "_missing");
  }
  return names;
}

std::vector<double> FeatureVector::EncodedValues() const {
  std::vector<double> values;
  values.reserve(features_.size() * 2);
  for (const Feature& f : features_) {
    values.push_back(f.missing ? 0.0 : f.value);
    if (f.missable) values.push_back(f.missing ? 1.0 : 0.0);
  }
  return values;
}

double SlopeThroughOrigin(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "slope of no values");
  double numerator = 0.0;
  double denominator = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    const double x = static_cast<double>(i + 1);
    numerator += x * values[i];
    denominator += x * x;
  }
  return numerator / denominator;
}

double CenteredSlope(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "slope of no values");
  const size_t m = values.size();
  if (m == 1) return 0.0;
  const double mean_x = static_cast<double>(m + 1) / 2.0;
  double mean_v = 0.0;
  for (double v : values) mean_v += v;
  mean_v /= static_cast<double>(m);
  double numerator = 0.0;
  double denominator = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double dx = static_cast<double>(i + 1) - mean_x;
    numerator += dx * (values[i] - mean_v);
    denominator += dx * dx;
  }
  return numerator / denominator;
}

double Percentile90(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "percentile of no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();
  const size_t rank = (9 * n + 9) / 10;  // ceil(0.9 n) in integers
  return sorted[rank - 1];
}

namespace {

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::optional<double> OptionalPercentile90(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return Percentile90(values);
}

template <typename T>
std::optional<double> AsDouble(const std::optional<T>& value) {
  if (!value) return std::nullopt;
  return static_cast<double>(*value);
}

void AddAverageAndPercentile(FeatureVector& fv, const std::string& stem,
                             const std::vector<double>& values) {
  fv.AddOptional(stem + "_avg", Mean(values));
  fv.AddOptional(stem + "_90p", OptionalPercentile90(values));
}

void AddContentFeatures(FeatureVector& fv, const ContentRecord* content) {
  auto field = [&](double value) -> std::optional<double> {
    if (content == nullptr) return std::nullopt;
    return value;
  };
  for (size_t i = 0; i < ContentRecord::kScoreNames.size(); ++i) {
    fv.AddOptional(std::string(ContentRecord::kScoreNames[i]),
                   field(content ? content->scores[i] : 0.0));
  }
  fv.AddOptional("is_en", field(content && content->is_en ? 1.0 : 0.0));
  fv.AddOptional("has_caption",
                 field(content && content->has_caption ? 1.0 : 0.0));
  fv.AddOptional("liwc_pos", field(content ? content->liwc_pos : 0.0));
  fv.AddOptional("liwc_neg", field(content ? content->liwc_neg : 0.0));
  fv.AddOptional("liwc_soc", field(content ? content->liwc_soc : 0.0));
}

void AddRootFeatures(FeatureVector& fv, const CascadeTree& tree, size_t k) {
  const ReshareEvent& root = tree.node(0);
  const ReshareEvent& last = tree.node(k);
  const bool is_user = root.node_type == NodeType::kUser;
  fv.AddOptional("views_0_k", AsDouble(last.views_orig_cum));
  fv.Add("orig_is_page", root.node_type == NodeType::kPage ? 1.0 : 0.0);
  fv.Add("outdeg_v0", static_cast<double>(root.outdeg));
  auto user_only = [&](std::optional<double> v) {
    return is_user ? v : std::nullopt;
  };
  fv.AddOptional("age_0", user_only(root.age_years));
  std::optional<double> female;
  if (root.gender) female = *root.gender == Gender::kFemale ? 1.0 : 0.0;
  fv.AddOptional("gender_0", user_only(female));
  fv.AddOptional("fb_age_0", user_only(root.fb_age_days));
  fv.AddOptional("activity_0", user_only(root.activity_days));
}

void AddResharerFeatures(FeatureVector& fv, const CascadeTree& tree,
                         size_t k) {
  fv.AddOptional("views_1_km1_k", AsDouble(tree.node(k).views_reshares_cum));

  double pages = 0.0;
  double females = 0.0;
  std::vector<double> friends, fans, subscribers, fb_ages, activities, ages;
  for (size_t i = 0; i <= k; ++i) {
    const ReshareEvent& e = tree.node(i);
    if (e.node_type == NodeType::kPage) pages += 1.0;
    if (i == 0) continue;
    if (e.node_type == NodeType::kPage) {
      fans.push_back(static_cast<double>(e.fan_count.value_or(e.outdeg)));
      continue;
    }
    if (e.friend_count) friends.push_back(static_cast<double>(*e.friend_count));
    if (e.subscriber_count) {
      subscribers.push_back(static_cast<double>(*e.subscriber_count));
    }
    if (e.fb_age_days) fb_ages.push_back(*e.fb_age_days);
    if (e.activity_days) activities.push_back(*e.activity_days);
    if (e.age_years) ages.push_back(*e.age_years);
    if (e.gender == Gender::kFemale) females += 1.0;
  }
  fv.Add("pages_k", pages);
  AddAverageAndPercentile(fv, "friends_k", friends);
  AddAverageAndPercentile(fv, "fans_k", fans);
  AddAverageAndPercentile(fv, "subscribers_k", subscribers);
  AddAverageAndPercentile(fv, "fb_ages_k", fb_ages);
  AddAverageAndPercentile(fv, "activities_k", activities);
  AddAverageAndPercentile(fv, "ages_k", ages);
  fv.Add("female_k", females);
}

struct GraphCounts {
  std::vector<double> induced_degree;  // per participant
  double orig_connections = 0.0;
  double border_nodes = 0.0;
  double border_edges = 0.0;
  double subgraph_edges = 0.0;
  bool did_leave = false;
};

GraphCounts CountGraphFeatures(const CascadeTree& tree, size_t k,
                               const SocialGraph& graph) {
  GraphCounts counts;
  counts.induced_degree.assign(k + 1, 0.0);
  std::vector<std::optional<SocialGraph::NodeIndex>> index(k + 1);
  std::unordered_set<SocialGraph::NodeIndex> members;
  for (size_t i = 0; i <= k; ++i) {
    index[i] = graph.Find(tree.node(i).node_id);
    if (index[i]) members.insert(*index[i]);
  }

  std::unordered_set<SocialGraph::NodeIndex> border;
  double degree_sum = 0.0;
  double internal_arcs = 0.0;
  for (size_t i = 0; i <= k; ++i) {
    if (!index[i]) continue;
    for (SocialGraph::NodeIndex v : graph.Neighbors(*index[i])) {
      degree_sum += 1.0;
      if (members.count(v)) {
        counts.induced_degree[i] += 1.0;
        internal_arcs += 1.0;
      } else {
        border.insert(v);
      }
    }
  }
  // Undirected adjacency stores internal edges twice.
  counts.subgraph_edges = graph.directed() ? internal_arcs : internal_arcs / 2.0;
  counts.border_edges = graph.directed() ? degree_sum
                                         : degree_sum - counts.subgraph_edges;
  counts.border_nodes = static_cast<double>(border.size());

  for (size_t i = 1; i <= k; ++i) {
    const bool connected =
        index[0] && index[i] && graph.HasEdge(*index[0], *index[i]);
    if (connected) {
      counts.orig_connections += 1.0;
    } else {
      counts.did_leave = true;
    }
  }
  return counts;
}

void AddStructuralFeatures(FeatureVector& fv, const CascadeTree& tree,
                           size_t k, const SocialGraph* graph,
                           const FeatureOptions& options) {
  for (size_t i = 1; i <= k; ++i) {
    fv.Add("outdeg_v" + std::to_string(i),
           static_cast<double>(tree.node(i).outdeg));
  }

  std::optional<GraphCounts> counts;
  if (graph != nullptr) counts = CountGraphFeatures(tree, k, *graph);
  auto graph_value = [&](auto getter) -> std::optional<double> {
    if (!counts) return std::nullopt;
    return getter(*counts);
  };

  for (size_t i = 0; i <= k; ++i) {
    fv.AddOptional("outdeg_sub_v" + std::to_string(i),
                   graph_value([i](const GraphCounts& c) {
                     return c.induced_degree[i];
                   }));
  }
  std::vector<double> tree_degree(k + 1, 0.0);
  for (size_t i = 1; i <= k; ++i) tree_degree[tree.parent(i)] += 1.0;
  for (size_t i = 0; i <= k; ++i) {
    fv.Add("outdeg_tree_v" + std::to_string(i), tree_degree[i]);
  }

  fv.AddOptional("orig_connections_k", graph_value([](const GraphCounts& c) {
                   return c.orig_connections;
                 }));
  fv.AddOptional("border_nodes_k", graph_value([](const GraphCounts& c) {
                   return c.border_nodes;
                 }));
  fv.AddOptional("border_edges_k", graph_value([](const GraphCounts& c) {
                   return c.border_edges;
                 }));
  fv.AddOptional("subgraph_edges_k", graph_value([](const GraphCounts& c) {
                   return c.subgraph_edges;
                 }));

  std::vector<double> depths;
  depths.reserve(k);
  bool deep = false;
  for (size_t i = 1; i <= k; ++i) {
    depths.push_back(static_cast<double>(tree.depth(i)));
    if (tree.depth(i) >= 2) deep = true;
  }
  fv.Add("depth_slope_k", options.centered_slopes ? CenteredSlope(depths)
                                                  : SlopeThroughOrigin(depths));
  fv.Add("depths_k_avg", *Mean(depths));
  fv.Add("depths_k_90p", Percentile90(depths));

  if (counts) {
    fv.Add("did_leave", counts->did_leave ? 1.0 : 0.0);
  } else {
    fv.Add("did_leave", deep ? 1.0 : 0.0);
    fv.did_leave_approximate = true;
  }
}

void AddTemporalFeatures(FeatureVector& fv, const CascadeTree& tree, size_t k,
                         const FeatureOptions& options) {
  // time[i] is the i-th reshare's offset from the root (time[0] = 0).
  std::vector<double> time(k + 1);
  for (size_t i = 0; i <= k; ++i) time[i] = tree.node(i).timestamp;
  for (size_t i = 1; i <= k; ++i) fv.Add("time_" + std::to_string(i), time[i]);

  const size_t half = k / 2;
  std::optional<double> first_half;
  std::optional<double> second_half;
  std::optional<double> gap_slope;
  if (half >= 2) {
    first_half = (time[half] - time[1]) / static_cast<double>(half - 1);
  }
  if (k >= 2) {
    second_half = (time[k] - time[half]) / static_cast<double>(k - half);
    std::vector<double> gaps;
    gaps.reserve(k - 1);
    for (size_t i = 1; i < k; ++i) gaps.push_back(time[i + 1] - time[i]);
    gap_slope = options.centered_slopes ? CenteredSlope(gaps)
                                        : SlopeThroughOrigin(gaps);
  }
  fv.AddOptional("gap_avg_first_half", first_half);
  fv.AddOptional("gap_avg_second_half", second_half);
  fv.AddOptional("gap_slope", gap_slope);

  auto rate = [&](std::optional<int64_t> views) -> std::optional<double> {
    if (!views || !(time[k] > 0.0)) return std::nullopt;
    return static_cast<double>(*views) / time[k];
  };
  fv.AddOptional("views_0_k_rate", rate(tree.node(k).views_orig_cum));
  fv.AddOptional("views_1_km1_k_rate", rate(tree.node(k).views_reshares_cum));
}

}  // namespace

FeatureVector ExtractFeatures(const CascadeTree& tree, size_t k,
                              const SocialGraph* graph,
                              const ContentRecord* content,
                              const FeatureOptions& options) {
  if (k == 0) throw Error(ErrorCode::kBadParams, "k must be positive");
  if (k > tree.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds size " +
                    std::to_string(tree.size()) + " of cascade '" + tree.id() +
                    "'");
  }
  if (tree.node(0).timestamp != 0.0) {
    throw Error(ErrorCode::kTimeNotNormalized,
                "root of cascade '" + tree.id() + "' is not at time 0");
  }
  FeatureVector fv;
  AddContentFeatures(fv, content);
  AddRootFeatures(fv, tree, k);
  AddResharerFeatures(fv, tree, k);
  AddStructuralFeatures(fv, tree, k, graph, options);
  AddTemporalFeatures(fv, tree, k, options);
  return fv;
}

}  // namespace cascade
