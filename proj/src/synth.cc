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

#include "cascade/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <unordered_set>

#include "cascade/error.h"
#include "cascade/parallel.h"
#include "cascade/random.h"

namespace cascade {
namespace {

constexpr const char* kCategories[] = {"animals", "food",   "humor",
                                       "nature",  "people", "text"};

std::string Padded(const char* prefix, int64_t value, int width) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%s%0*lld", prefix, width,
                static_cast<long long>(value));
  return buffer;
}

size_t DrawSize(const SynthParams& params, Rng& rng) {
  const double x = PowerLawFromUniform(params.target_alpha, params.x_min,
                                       rng.UniformPositive());
  const double cap = static_cast<double>(
      std::min<int64_t>(params.max_size, params.n_nodes - 1));
  return static_cast<size_t>(std::max(1.0, std::round(std::min(x, cap))));
}

size_t PickRoot(const SynthParams& params,
                const std::vector<size_t>& pages,
                const std::vector<size_t>& users, Rng& rng) {
  const bool page = !pages.empty() &&
                    (users.empty() || rng.Bernoulli(params.page_fraction));
  const auto& pool = page ? pages : users;
  return pool[rng.UniformInt(pool.size())];
}

ContentRecord RandomContent(const std::string& cascade_id, Rng& rng) {
  ContentRecord content;
  content.cascade_id = cascade_id;
  for (double& score : content.scores) score = rng.Uniform01();
  content.is_en = rng.Bernoulli(0.6);
  content.has_caption = rng.Bernoulli(0.5);
  if (content.has_caption) {
    content.liwc_pos = 0.2 * rng.Uniform01();
    content.liwc_neg = 0.2 * rng.Uniform01();
    content.liwc_soc = 0.2 * rng.Uniform01();
  }
  content.category = kCategories[rng.UniformInt(std::size(kCategories))];
  return content;
}

ReshareEvent DescribeNode(const SyntheticNetwork& network, size_t node,
                          Rng& rng) {
  ReshareEvent e;
  e.node_id = SyntheticNodeId(node);
  e.node_type = network.node_types[node];
  const auto degree = static_cast<int64_t>(
      network.graph.OutDegree(static_cast<SocialGraph::NodeIndex>(node)));
  if (e.node_type == NodeType::kPage) {
    e.fan_count = degree;
    e.outdeg = degree;
    return e;
  }
  e.friend_count = degree;
  e.subscriber_count = static_cast<int64_t>(
      rng.UniformInt(static_cast<uint64_t>(degree / 3 + 1)));
  e.outdeg = *e.friend_count + *e.subscriber_count;
  e.age_years = 18.0 + static_cast<double>(rng.UniformInt(50));
  e.gender = rng.Bernoulli(0.5) ? Gender::kFemale : Gender::kMale;
  e.fb_age_days = 30.0 + static_cast<double>(rng.UniformInt(3000));
  e.activity_days = static_cast<double>(rng.UniformInt(31));
  return e;
}

}  // namespace

void ValidateSynthParams(const SynthParams& p) {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kBadParams, what);
  };
  if (p.attachment_m < 1) fail("attachment_m must be >= 1");
  if (p.n_nodes <= p.attachment_m) fail("n_nodes must exceed attachment_m");
  if (!(p.page_fraction >= 0.0 && p.page_fraction <= 1.0)) {
    fail("page_fraction must lie in [0, 1]");
  }
  if (!(p.page_degree_boost >= 1.0)) fail("page_degree_boost must be >= 1");
  if (!(p.reshare_prob > 0.0 && p.reshare_prob <= 1.0)) {
    fail("reshare_prob must lie in (0, 1]");
  }
  if (!(p.rate_boost >= 1.0)) fail("rate_boost must be >= 1");
  if (!(p.target_alpha > 1.0)) fail("target_alpha must exceed 1");
  if (!(p.x_min > 0.0)) fail("x_min must be positive");
  if (p.n_cascades < 0 || p.n_clusters < 0) fail("counts must be nonnegative");
  if (p.n_clusters > 0 && p.cluster_size < 2) fail("cluster_size must be >= 2");
  if (!(p.mean_delay > 0.0)) fail("mean_delay must be positive");
  if (p.max_size < 1) fail("max_size must be >= 1");
}

SynthParams ParseSynthParams(const KeyValueDocument& doc) {
  SynthParams p;
  for (const auto& [key, value] : doc.entries()) {
    if (key == "n_nodes") p.n_nodes = ParseInt(value);
    else if (key == "attachment_m") p.attachment_m = ParseInt(value);
    else if (key == "page_fraction") p.page_fraction = ParseDouble(value);
    else if (key == "page_degree_boost") p.page_degree_boost = ParseDouble(value);
    else if (key == "reshare_prob") p.reshare_prob = ParseDouble(value);
    else if (key == "rate_boost") p.rate_boost = ParseDouble(value);
    else if (key == "target_alpha") p.target_alpha = ParseDouble(value);
    else if (key == "x_min") p.x_min = ParseDouble(value);
    else if (key == "n_cascades") p.n_cascades = ParseInt(value);
    else if (key == "seed") p.seed = static_cast<uint64_t>(ParseInt(value));
    else if (key == "mean_delay") p.mean_delay = ParseDouble(value);
    else if (key == "max_size") p.max_size = ParseInt(value);
    else if (key == "n_clusters") p.n_clusters = ParseInt(value);
    else if (key == "cluster_size") p.cluster_size = ParseInt(value);
    else throw Error(ErrorCode::kConfigInvalid, "unknown synth key '" + key + "'");
  }
  ValidateSynthParams(p);
  return p;
}

KeyValueDocument SynthParamsDocument(const SynthParams& p) {
  KeyValueDocument doc;
  doc.Add("n_nodes", std::to_string(p.n_nodes));
  doc.Add("attachment_m", std::to_string(p.attachment_m));
  doc.Add("page_fraction", FormatDouble(p.page_fraction));
  doc.Add("page_degree_boost", FormatDouble(p.page_degree_boost));
  doc.Add("reshare_prob", FormatDouble(p.reshare_prob));
  doc.Add("rate_boost", FormatDouble(p.rate_boost));
  doc.Add("target_alpha", FormatDouble(p.target_alpha));
  doc.Add("x_min", FormatDouble(p.x_min));
  doc.Add("n_cascades", std::to_string(p.n_cascades));
  doc.Add("seed", std::to_string(p.seed));
  doc.Add("mean_delay", FormatDouble(p.mean_delay));
  doc.Add("max_size", std::to_string(p.max_size));
  doc.Add("n_clusters", std::to_string(p.n_clusters));
  doc.Add("cluster_size", std::to_string(p.cluster_size));
  return doc;
}

double PowerLawFromUniform(double alpha, double x_min, double u) {
  return x_min * std::pow(u, -1.0 / (alpha - 1.0));
}

std::vector<double> SamplePowerLawSizes(double alpha, double x_min, size_t n,
                                        uint64_t seed) {
  if (!(alpha > 1.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange,
                "alpha must exceed 1, got " + std::to_string(alpha));
  }
  if (!(x_min > 0.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange, "x_min must be positive");
  }
  Rng rng(seed);
  std::vector<double> samples(n);
  for (double& x : samples) {
    x = PowerLawFromUniform(alpha, x_min, rng.UniformPositive());
  }
  return samples;
}

std::string SyntheticNodeId(size_t index) {
  return "n" + std::to_string(index);
}

SyntheticNetwork GenerateSocialGraph(const SynthParams& params, uint64_t seed) {
  ValidateSynthParams(params);
  Rng rng(seed);
  const auto n = static_cast<size_t>(params.n_nodes);
  const auto m = static_cast<size_t>(params.attachment_m);

  SyntheticNetwork network;
  network.node_types.resize(n);
  for (auto& type : network.node_types) {
    type = rng.Bernoulli(params.page_fraction) ? NodeType::kPage
                                                : NodeType::kUser;
  }
  for (size_t i = 0; i < n; ++i) network.graph.AddNode(SyntheticNodeId(i));

  const double whole = std::floor(params.page_degree_boost);
  const double fraction = params.page_degree_boost - whole;
  std::vector<size_t> stubs;
  auto add_stubs = [&](size_t node) {
    size_t copies = 1;
    if (network.node_types[node] == NodeType::kPage) {
      copies = static_cast<size_t>(whole) + (rng.Bernoulli(fraction) ? 1 : 0);
    }
    stubs.insert(stubs.end(), copies, node);
  };
  auto connect = [&](size_t a, size_t b) {
    network.graph.AddEdge(SyntheticNodeId(a), SyntheticNodeId(b));
    add_stubs(a);
    add_stubs(b);
  };

  for (size_t a = 0; a <= m; ++a) {
    for (size_t b = a + 1; b <= m; ++b) connect(a, b);
  }
  std::vector<size_t> targets;
  for (size_t v = m + 1; v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const size_t t = stubs[rng.UniformInt(stubs.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    for (size_t t : targets) connect(v, t);
  }
  return network;
}

std::vector<ReshareEvent> SimulateCascade(const SyntheticNetwork& network,
                                          const SynthParams& params,
                                          const CascadePlan& plan,
                                          uint64_t seed) {
  const size_t n = network.node_types.size();
  if (plan.root >= n || plan.target_size == 0 || plan.target_size >= n) {
    throw Error(ErrorCode::kBadParams,
                "cascade plan does not fit the network of " +
                    std::to_string(n) + " nodes");
  }
  Rng rng(seed);
  const SocialGraph& graph = network.graph;

  std::vector<size_t> sharers{plan.root};
  std::vector<size_t> parents{plan.root};
  std::unordered_set<size_t> joined{plan.root};
  // Pending exposures: (exposed node, exposing sharer).
  std::vector<std::pair<size_t, size_t>> pool;
  auto expose = [&](size_t sharer) {
    for (SocialGraph::NodeIndex v :
         graph.Neighbors(static_cast<SocialGraph::NodeIndex>(sharer))) {
      if (!joined.count(v)) pool.emplace_back(v, sharer);
    }
  };
  expose(plan.root);

  while (sharers.size() <= plan.target_size) {
    size_t node = 0;
    size_t parent = 0;
    if (!pool.empty()) {
      const size_t pick = rng.UniformInt(pool.size());
      std::tie(node, parent) = pool[pick];
      pool[pick] = pool.back();
      pool.pop_back();
      if (joined.count(node) || !rng.Bernoulli(params.reshare_prob)) continue;
    } else {
      do {
        node = rng.UniformInt(n);
      } while (joined.count(node));
      parent = sharers[rng.UniformInt(sharers.size())];
    }
    joined.insert(node);
    sharers.push_back(node);
    parents.push_back(parent);
    expose(node);
  }

  std::vector<ReshareEvent> events;
  events.reserve(sharers.size());
  const double base_rate = 1.0 / params.mean_delay;
  double time = 0.0;
  int64_t reshare_views = 0;
  int64_t root_outdeg = 0;
  for (size_t i = 0; i < sharers.size(); ++i) {
    ReshareEvent e = DescribeNode(network, sharers[i], rng);
    e.cascade_id = plan.cascade_id;
    if (i == 0) {
      root_outdeg = e.outdeg;
      e.views_orig_cum = 0;
      e.views_reshares_cum = 0;
    } else {
      bool boosted = false;
      switch (plan.boost) {
        case BoostMode::kByDestinedSize:
          boosted = plan.target_size >= 2 * i;
          break;
        case BoostMode::kAll:
          boosted = true;
          break;
        case BoostMode::kNone:
          break;
      }
      time += rng.Exponential(base_rate * (boosted ? params.rate_boost : 1.0));
      e.parent_id = SyntheticNodeId(parents[i]);
      e.views_orig_cum = root_outdeg;
      e.views_reshares_cum = reshare_views;
      reshare_views += e.outdeg;
    }
    e.timestamp = time;
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<SyntheticCascade> SimulateCascades(const SyntheticNetwork& network,
                                               const SynthParams& params,
                                               uint64_t seed, int threads) {
  ValidateSynthParams(params);
  if (static_cast<int64_t>(network.node_types.size()) != params.n_nodes) {
    throw Error(ErrorCode::kBadParams, "network size differs from n_nodes");
  }
  std::vector<size_t> pages, users;
  for (size_t i = 0; i < network.node_types.size(); ++i) {
    (network.node_types[i] == NodeType::kPage ? pages : users).push_back(i);
  }

  const auto regular = static_cast<size_t>(params.n_cascades);
  const auto clusters = static_cast<size_t>(params.n_clusters);
  const auto per_cluster = static_cast<size_t>(params.cluster_size);
  std::vector<SyntheticCascade> out(regular + clusters * per_cluster);

  ParallelFor(regular, threads, [&](size_t c) {
    Rng rng(DeriveSeed(seed, c));
    CascadePlan plan;
    plan.cascade_id = Padded("c", static_cast<int64_t>(c), 6);
    plan.target_size = DrawSize(params, rng);
    plan.root = PickRoot(params, pages, users, rng);
    out[c].content = RandomContent(plan.cascade_id, rng);
    out[c].events = SimulateCascade(network, params, plan, rng.Next());
  });

  ParallelFor(clusters, threads, [&](size_t g) {
    Rng rng(DeriveSeed(seed, regular + g));
    const std::string cluster_id = Padded("cl", static_cast<int64_t>(g), 5);
    std::vector<size_t> sizes(per_cluster);
    for (size_t& s : sizes) s = DrawSize(params, rng);
    const size_t winner = static_cast<size_t>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    // Break ties so the winner is unique; drop the others if the winner
    // already sits at the cap.
    const size_t cap = std::min(static_cast<size_t>(params.max_size),
                                network.node_types.size() - 1);
    const size_t top = sizes[winner];
    for (size_t j = 0; j < per_cluster; ++j) {
      if (j == winner || sizes[j] != top) continue;
      if (top < cap) {
        sizes[winner] = top + 1;
      } else if (top > 1) {
        sizes[j] = top - 1;
      }
    }
    ContentRecord shared = RandomContent("", rng);
    shared.cluster_id = cluster_id;
    for (size_t j = 0; j < per_cluster; ++j) {
      SyntheticCascade& cascade = out[regular + g * per_cluster + j];
      CascadePlan plan;
      plan.cascade_id = "x" + cluster_id.substr(2) + Padded("_", static_cast<int64_t>(j), 3);
      plan.target_size = std::min(sizes[j], network.node_types.size() - 1);
      plan.root = PickRoot(params, pages, users, rng);
      plan.boost = j == winner ? BoostMode::kAll : BoostMode::kNone;
      cascade.content = shared;
      cascade.content.cascade_id = plan.cascade_id;
      cascade.events = SimulateCascade(network, params, plan, rng.Next());
    }
  });
  return out;
}

}  // namespace cascade
