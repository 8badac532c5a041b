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

#include "cascade/error.h"
#include "cascade/random.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace cascade {
namespace {

using testing::Event;

double Value(const FeatureVector& fv, std::string_view name) {
  const Feature& f = fv.Get(name);
  EXPECT_FALSE(f.missing) << name;
  return f.value;
}

bool Missing(const FeatureVector& fv, std::string_view name) {
  return fv.Get(name).missing;
}

CascadeTree Chain() {
  return BuildCascade({Event("r", std::nullopt, 0), Event("a", "r", 10),
                       Event("b", "a", 20), Event("c", "b", 30),
                       Event("d", "c", 40), Event("e", "d", 50)});
}

CascadeTree FiveStar() {
  std::vector<ReshareEvent> events = {Event("r", std::nullopt, 0)};
  for (int i = 1; i <= 5; ++i) {
    events.push_back(Event("u" + std::to_string(i), "r", i));
  }
  return BuildCascade(events);
}

// Random cascade with a mix of users and pages and partially filled
// demographics.
CascadeTree RandomAttributedTree(size_t n, Rng& rng) {
  std::vector<ReshareEvent> events;
  double t = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ReshareEvent e = Event(
        "v" + std::to_string(i),
        i == 0 ? std::nullopt
               : std::optional<std::string>("v" +
                                            std::to_string(rng.UniformInt(i))),
        t);
    t += 1.0 + std::floor(rng.Exponential(0.05));
    e.node_type = rng.Bernoulli(0.2) ? NodeType::kPage : NodeType::kUser;
    e.outdeg = static_cast<int64_t>(rng.UniformInt(500));
    if (e.node_type == NodeType::kUser) {
      e.friend_count = e.outdeg;
      if (rng.Bernoulli(0.7)) e.age_years = 18.0 + static_cast<double>(rng.UniformInt(50));
      if (rng.Bernoulli(0.7)) e.fb_age_days = static_cast<double>(rng.UniformInt(3000));
      if (rng.Bernoulli(0.7)) e.activity_days = static_cast<double>(rng.UniformInt(30));
      if (rng.Bernoulli(0.8)) {
        e.gender = rng.Bernoulli(0.5) ? Gender::kFemale : Gender::kMale;
      }
      e.subscriber_count = static_cast<int64_t>(rng.UniformInt(20));
    } else {
      e.fan_count = e.outdeg;
    }
    e.views_orig_cum = static_cast<int64_t>(i * 10);
    e.views_reshares_cum = static_cast<int64_t>(i * 3);
    events.push_back(std::move(e));
  }
  return BuildCascade(events);
}

TEST(SlopeThroughOrigin, Examples) {
  EXPECT_DOUBLE_EQ(SlopeThroughOrigin(std::vector<double>{1, 2, 3}), 1.0);
  EXPECT_EQ(SlopeThroughOrigin(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_NEAR(SlopeThroughOrigin(std::vector<double>{2, 2, 2}), 12.0 / 14.0,
              1e-15);
  EXPECT_THROW(SlopeThroughOrigin(std::vector<double>{}), Error);
}

TEST(CenteredSlope, Examples) {
  EXPECT_EQ(CenteredSlope(std::vector<double>{2, 2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(CenteredSlope(std::vector<double>{5, 7, 9}), 2.0);
  EXPECT_EQ(CenteredSlope(std::vector<double>{4}), 0.0);
}

TEST(Percentile90, Examples) {
  EXPECT_EQ(Percentile90(std::vector<double>{5}), 5.0);
  EXPECT_EQ(Percentile90(std::vector<double>{10, 9, 8, 7, 6, 5, 4, 3, 2, 1}),
            9.0);
  EXPECT_EQ(Percentile90(std::vector<double>{1, 2}), 2.0);
  EXPECT_THROW(Percentile90(std::vector<double>{}), Error);
}

TEST(Percentile90, NearestRankOracle) {
  Rng rng(4);
  for (size_t n = 1; n <= 60; ++n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.Uniform01();
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<size_t>(std::ceil(0.9 * static_cast<double>(n) - 1e-12));
    EXPECT_EQ(Percentile90(v), sorted[rank - 1]) << n;
  }
}

TEST(ExtractFeatures, ChainExample) {
  const FeatureVector fv = ExtractFeatures(Chain(), 5, nullptr, nullptr);
  EXPECT_EQ(Value(fv, "time_5"), 50.0);
  EXPECT_EQ(Value(fv, "gap_avg_first_half"), 10.0);
  EXPECT_EQ(Value(fv, "gap_avg_second_half"), 10.0);
  EXPECT_NEAR(Value(fv, "gap_slope"), 100.0 / 30.0, 1e-12);
  EXPECT_EQ(Value(fv, "depths_k_avg"), 3.0);
  EXPECT_EQ(Value(fv, "depths_k_90p"), 5.0);
  EXPECT_EQ(Value(fv, "did_leave"), 1.0);
  EXPECT_TRUE(fv.did_leave_approximate);
  EXPECT_EQ(Value(fv, "outdeg_tree_v0"), 1.0);
  EXPECT_EQ(Value(fv, "outdeg_tree_v5"), 0.0);
}

TEST(ExtractFeatures, CenteredSlopesSwitch) {
  FeatureOptions options;
  options.centered_slopes = true;
  const FeatureVector fv = ExtractFeatures(Chain(), 5, nullptr, nullptr, options);
  EXPECT_EQ(Value(fv, "gap_slope"), 0.0);
  EXPECT_DOUBLE_EQ(Value(fv, "depth_slope_k"), 1.0);
}

TEST(ExtractFeatures, StarWithGraph) {
  SocialGraph graph(false);
  for (int i = 1; i <= 5; ++i) graph.AddEdge("r", "u" + std::to_string(i));
  graph.AddEdge("u1", "u2");
  graph.AddEdge("u1", "x");
  graph.AddEdge("u3", "x");
  graph.AddEdge("u4", "y");
  const FeatureVector fv = ExtractFeatures(FiveStar(), 5, &graph, nullptr);
  EXPECT_EQ(Value(fv, "did_leave"), 0.0);
  EXPECT_FALSE(fv.did_leave_approximate);
  EXPECT_EQ(Value(fv, "orig_connections_k"), 5.0);
  EXPECT_EQ(Value(fv, "depths_k_avg"), 1.0);
  EXPECT_NEAR(Value(fv, "depth_slope_k"), 15.0 / 55.0, 1e-15);
  EXPECT_EQ(Value(fv, "subgraph_edges_k"), 6.0);
  EXPECT_EQ(Value(fv, "border_nodes_k"), 2.0);
  EXPECT_EQ(Value(fv, "border_edges_k"), 9.0);
  EXPECT_EQ(Value(fv, "outdeg_sub_v0"), 5.0);
  EXPECT_EQ(Value(fv, "outdeg_sub_v1"), 2.0);
  EXPECT_EQ(Value(fv, "outdeg_sub_v5"), 1.0);
}

TEST(ExtractFeatures, DidLeaveFromGraph) {
  SocialGraph graph(false);
  graph.AddEdge("r", "u1");
  const FeatureVector fv = ExtractFeatures(FiveStar(), 5, &graph, nullptr);
  EXPECT_EQ(Value(fv, "did_leave"), 1.0);
  EXPECT_EQ(Value(fv, "orig_connections_k"), 1.0);
  const FeatureVector first = ExtractFeatures(FiveStar(), 1, &graph, nullptr);
  EXPECT_EQ(Value(first, "did_leave"), 0.0);
}

TEST(ExtractFeatures, DirectedBorderEdgesCountOutArcs) {
  SocialGraph graph(true);
  graph.AddEdge("r", "u1");
  graph.AddEdge("u1", "r");
  graph.AddEdge("u1", "x");
  const FeatureVector fv = ExtractFeatures(FiveStar(), 1, &graph, nullptr);
  EXPECT_EQ(Value(fv, "subgraph_edges_k"), 2.0);
  EXPECT_EQ(Value(fv, "border_edges_k"), 3.0);
  EXPECT_EQ(Value(fv, "border_nodes_k"), 1.0);
}

TEST(ExtractFeatures, ViewRates) {
  std::vector<ReshareEvent> events = {Event("r", std::nullopt, 0)};
  for (int i = 1; i <= 5; ++i) {
    ReshareEvent e = Event("u" + std::to_string(i), "r", 100.0 * i);
    e.views_orig_cum = 200 * i;
    e.views_reshares_cum = 50 * i;
    events.push_back(e);
  }
  const FeatureVector fv =
      ExtractFeatures(BuildCascade(events), 5, nullptr, nullptr);
  EXPECT_EQ(Value(fv, "views_0_k"), 1000.0);
  EXPECT_EQ(Value(fv, "views_0_k_rate"), 2.0);
  EXPECT_EQ(Value(fv, "views_1_km1_k_rate"), 0.5);
}

TEST(ExtractFeatures, MissingPropagation) {
  const FeatureVector fv = ExtractFeatures(Chain(), 5, nullptr, nullptr);
  for (const char* name :
       {"orig_connections_k", "border_nodes_k", "border_edges_k",
        "subgraph_edges_k", "outdeg_sub_v0", "score_food", "is_en",
        "liwc_soc", "views_0_k", "views_0_k_rate", "age_0", "gender_0",
        "friends_k_avg", "ages_k_90p", "fans_k_avg"}) {
    EXPECT_TRUE(Missing(fv, name)) << name;
  }
  const FeatureVector one = ExtractFeatures(Chain(), 1, nullptr, nullptr);
  EXPECT_TRUE(Missing(one, "gap_avg_first_half"));
  EXPECT_TRUE(Missing(one, "gap_avg_second_half"));
  EXPECT_TRUE(Missing(one, "gap_slope"));
  const FeatureVector three = ExtractFeatures(Chain(), 3, nullptr, nullptr);
  EXPECT_TRUE(Missing(three, "gap_avg_first_half"));
  EXPECT_EQ(Value(three, "gap_avg_second_half"), 10.0);
}

TEST(ExtractFeatures, RootDemographicsOnlyForUsers) {
  ReshareEvent root = Event("r", std::nullopt, 0);
  root.node_type = NodeType::kPage;
  root.age_years = 30;
  root.gender = Gender::kFemale;
  root.outdeg = 900;
  ReshareEvent fan = Event("a", "r", 5);
  fan.node_type = NodeType::kPage;
  fan.outdeg = 40;
  const FeatureVector fv =
      ExtractFeatures(BuildCascade({root, fan}), 1, nullptr, nullptr);
  EXPECT_TRUE(Missing(fv, "age_0"));
  EXPECT_TRUE(Missing(fv, "gender_0"));
  EXPECT_EQ(Value(fv, "orig_is_page"), 1.0);
  EXPECT_EQ(Value(fv, "outdeg_v0"), 900.0);
  EXPECT_EQ(Value(fv, "pages_k"), 2.0);
  EXPECT_EQ(Value(fv, "fans_k_avg"), 40.0);
  EXPECT_TRUE(Missing(fv, "friends_k_avg"));
}

TEST(ExtractFeatures, ContentFeatures) {
  ContentRecord content;
  content.cascade_id = "c";
  content.scores[4] = 0.75;
  content.is_en = true;
  content.liwc_neg = 0.125;
  const FeatureVector fv = ExtractFeatures(Chain(), 2, nullptr, &content);
  EXPECT_EQ(Value(fv, "score_food"), 0.75);
  EXPECT_EQ(Value(fv, "score_closeup"), 0.0);
  EXPECT_EQ(Value(fv, "is_en"), 1.0);
  EXPECT_EQ(Value(fv, "has_caption"), 0.0);
  EXPECT_EQ(Value(fv, "liwc_neg"), 0.125);
}

TEST(ExtractFeatures, Errors) {
  try {
    ExtractFeatures(Chain(), 6, nullptr, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKTooLarge);
  }
  try {
    ExtractFeatures(Chain(), 0, nullptr, nullptr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadParams);
  }
}

TEST(FeatureVector, EncodingAddsMissingIndicators) {
  FeatureVector fv;
  fv.Add("a", 2.0);
  fv.AddOptional("b", std::nullopt);
  fv.AddOptional("c", 3.0);
  EXPECT_EQ(fv.EncodedNames(),
            (std::vector<std::string>{"a", "b", "b_missing", "c", "c_missing"}));
  EXPECT_EQ(fv.EncodedValues(), (std::vector<double>{2, 0, 1, 3, 0}));
  try {
    fv.Get("zzz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFeature);
  }
}

TEST(ExtractFeatures, EncodingIsStableAcrossCascades) {
  Rng rng(10);
  SocialGraph graph(false);
  graph.AddEdge("v0", "v1");
  const std::vector<std::string> names =
      ExtractFeatures(Chain(), 5, &graph, nullptr).EncodedNames();
  for (int trial = 0; trial < 20; ++trial) {
    const CascadeTree tree = RandomAttributedTree(6 + rng.UniformInt(20), rng);
    EXPECT_EQ(ExtractFeatures(tree, 5, &graph, nullptr).EncodedNames(), names);
  }
}

TEST(ExtractFeatures, Properties) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const CascadeTree tree = RandomAttributedTree(2 + rng.UniformInt(40), rng);
    const size_t k = 1 + rng.UniformInt(tree.size());
    const FeatureVector fv = ExtractFeatures(tree, k, nullptr, nullptr);
    const auto kd = static_cast<double>(k);

    EXPECT_EQ(ExtractFeatures(tree, k, nullptr, nullptr), fv);
    EXPECT_EQ(ExtractFeatures(Prefix(tree, k), k, nullptr, nullptr), fv);

    EXPECT_LE(Value(fv, "female_k"), kd);
    EXPECT_LE(Value(fv, "pages_k"), kd + 1.0);
    EXPECT_GE(Value(fv, "depths_k_avg"), 1.0);
    for (const char* stem : {"friends_k", "fans_k", "subscribers_k", "fb_ages_k",
                             "activities_k", "ages_k"}) {
      const std::string avg = std::string(stem) + "_avg";
      const std::string p90 = std::string(stem) + "_90p";
      EXPECT_EQ(Missing(fv, avg), Missing(fv, p90));
      if (Missing(fv, avg)) continue;
      // Oracle: min and max over the same population.
      double lo = INFINITY, hi = -INFINITY;
      for (size_t i = 1; i <= k; ++i) {
        const ReshareEvent& e = tree.node(i);
        std::optional<double> v;
        const bool page = e.node_type == NodeType::kPage;
        if (std::string_view(stem) == "fans_k" && page) v = static_cast<double>(*e.fan_count);
        if (page) {
          if (!v) continue;
        } else if (std::string_view(stem) == "friends_k") {
          v = static_cast<double>(*e.friend_count);
        } else if (std::string_view(stem) == "subscribers_k") {
          v = static_cast<double>(*e.subscriber_count);
        } else if (std::string_view(stem) == "fb_ages_k") {
          v = e.fb_age_days;
        } else if (std::string_view(stem) == "activities_k") {
          v = e.activity_days;
        } else if (std::string_view(stem) == "ages_k") {
          v = e.age_years;
        }
        if (!v) continue;
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
      EXPECT_LE(lo, Value(fv, avg) + 1e-9) << avg;
      EXPECT_LE(Value(fv, avg), hi + 1e-9) << avg;
      EXPECT_LE(lo, Value(fv, p90)) << p90;
      EXPECT_LE(Value(fv, p90), hi) << p90;
    }
    for (const Feature& f : fv.features()) {
      if (!f.missing) {
        EXPECT_TRUE(std::isfinite(f.value)) << f.name;
      }
    }
  }
}

TEST(ExtractFeatures, TimeScaleCovariance) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const CascadeTree tree = RandomAttributedTree(8 + rng.UniformInt(30), rng);
    const size_t k = 5 + rng.UniformInt(3);
    for (double c : {4.0, 0.5}) {
      std::vector<ReshareEvent> events(tree.nodes().begin(), tree.nodes().end());
      for (ReshareEvent& e : events) e.timestamp *= c;
      const CascadeTree scaled = BuildCascade(events);
      const FeatureVector a = ExtractFeatures(tree, k, nullptr, nullptr);
      const FeatureVector b = ExtractFeatures(scaled, k, nullptr, nullptr);
      for (const Feature& f : a.features()) {
        const Feature& g = b.Get(f.name);
        ASSERT_EQ(f.missing, g.missing) << f.name;
        if (f.missing) continue;
        const bool temporal = f.name.rfind("time_", 0) == 0 ||
                              f.name.rfind("gap_", 0) == 0;
        const bool rate = f.name.find("_rate") != std::string::npos;
        if (temporal) {
          EXPECT_EQ(g.value, f.value * c) << f.name;
        } else if (rate) {
          EXPECT_EQ(g.value, f.value / c) << f.name;
        } else {
          EXPECT_EQ(g.value, f.value) << f.name;
        }
      }
    }
  }
}

}  // namespace
}  // namespace cascade
