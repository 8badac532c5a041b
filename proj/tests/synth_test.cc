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
#include <queue>
#include <sstream>

#include "cascade/error.h"
#include "cascade/features.h"
#include "cascade/random.h"
#include "cascade/stats.h"
#include "cascade/tasks.h"
#include "gtest/gtest.h"

namespace cascade {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIo;
}

SynthParams SmallParams() {
  SynthParams p;
  p.n_nodes = 3000;
  p.n_cascades = 300;
  p.max_size = 400;
  p.seed = 5;
  return p;
}

TEST(PowerLawFromUniform, Boundaries) {
  EXPECT_EQ(PowerLawFromUniform(2.0, 5.0, 1.0), 5.0);
  EXPECT_EQ(PowerLawFromUniform(2.0, 5.0, 0.5), 10.0);
  EXPECT_EQ(PowerLawFromUniform(3.0, 7.0, 1.0), 7.0);
}

TEST(SamplePowerLawSizes, RoundTripsThroughHillEstimator) {
  const std::vector<double> samples = SamplePowerLawSizes(2.0, 1.0, 1000000, 3);
  for (double x : samples) ASSERT_GE(x, 1.0);
  EXPECT_NEAR(FitPowerLawAlpha(samples, 1.0), 2.0, 0.05);
  EXPECT_EQ(SamplePowerLawSizes(2.0, 1.0, 100, 3),
            std::vector<double>(samples.begin(), samples.begin() + 100));
  EXPECT_EQ(CodeOf([] { SamplePowerLawSizes(1.0, 1.0, 5, 1); }),
            ErrorCode::kAlphaOutOfRange);
}

TEST(ValidateSynthParams, RejectsOutOfRange) {
  SynthParams p;
  p.n_nodes = 3;
  p.attachment_m = 3;
  EXPECT_EQ(CodeOf([&] { ValidateSynthParams(p); }), ErrorCode::kBadParams);
  p = SynthParams{};
  p.reshare_prob = 0.0;
  EXPECT_EQ(CodeOf([&] { ValidateSynthParams(p); }), ErrorCode::kBadParams);
  p = SynthParams{};
  p.rate_boost = 0.5;
  EXPECT_EQ(CodeOf([&] { ValidateSynthParams(p); }), ErrorCode::kBadParams);
  p = SynthParams{};
  p.target_alpha = 1.0;
  EXPECT_EQ(CodeOf([&] { ValidateSynthParams(p); }), ErrorCode::kBadParams);
  p = SynthParams{};
  p.page_degree_boost = 0.5;
  EXPECT_EQ(CodeOf([&] { GenerateSocialGraph(p, 1); }), ErrorCode::kBadParams);
}

TEST(ParseSynthParams, RoundTripAndUnknownKeys) {
  SynthParams p = SmallParams();
  p.rate_boost = 2.5;
  p.n_clusters = 4;
  EXPECT_EQ(ParseSynthParams(SynthParamsDocument(p)), p);

  std::stringstream text("n_nodes = 100\nbogus = 1\n");
  const KeyValueDocument doc = KeyValueDocument::Parse(text, "test");
  EXPECT_EQ(CodeOf([&] { ParseSynthParams(doc); }), ErrorCode::kConfigInvalid);
}

TEST(GenerateSocialGraph, SmallTree) {
  SynthParams p;
  p.n_nodes = 5;
  p.attachment_m = 1;
  const SyntheticNetwork net = GenerateSocialGraph(p, 9);
  EXPECT_EQ(net.graph.node_count(), 5u);
  EXPECT_EQ(net.graph.edge_count(), 4u);
  // Connected: BFS reaches every node.
  std::vector<bool> seen(5);
  std::queue<SocialGraph::NodeIndex> queue;
  queue.push(0);
  seen[0] = true;
  size_t reached = 1;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop();
    for (auto v : net.graph.Neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        queue.push(v);
      }
    }
  }
  EXPECT_EQ(reached, 5u);
}

TEST(GenerateSocialGraph, HandshakePagesAndDeterminism) {
  SynthParams p;
  p.n_nodes = 10000;
  p.page_fraction = 0.05;
  p.page_degree_boost = 4.0;
  const SyntheticNetwork net = GenerateSocialGraph(p, 2);
  size_t degree_sum = 0;
  double page_sum = 0, user_sum = 0;
  size_t pages = 0, users = 0;
  for (size_t i = 0; i < net.graph.node_count(); ++i) {
    const size_t deg = net.graph.OutDegree(static_cast<SocialGraph::NodeIndex>(i));
    degree_sum += deg;
    if (net.node_types[i] == NodeType::kPage) {
      page_sum += static_cast<double>(deg);
      ++pages;
    } else {
      user_sum += static_cast<double>(deg);
      ++users;
    }
  }
  EXPECT_EQ(degree_sum, 2 * net.graph.edge_count());
  ASSERT_GT(pages, 0u);
  EXPECT_GE(page_sum / static_cast<double>(pages),
            user_sum / static_cast<double>(users));

  const SyntheticNetwork again = GenerateSocialGraph(p, 2);
  EXPECT_EQ(again.graph.Edges(), net.graph.Edges());
  EXPECT_EQ(again.node_types, net.node_types);
}

TEST(SimulateCascade, ForcedStar) {
  const size_t d = 8;
  SyntheticNetwork net;
  net.node_types.assign(d + 1, NodeType::kUser);
  for (size_t i = 0; i <= d; ++i) net.graph.AddNode(SyntheticNodeId(i));
  for (size_t i = 1; i <= d; ++i) {
    net.graph.AddEdge(SyntheticNodeId(0), SyntheticNodeId(i));
  }
  SynthParams p;
  p.reshare_prob = 1.0;
  CascadePlan plan;
  plan.cascade_id = "s";
  plan.root = 0;
  plan.target_size = d;
  const CascadeTree tree = BuildCascade(SimulateCascade(net, p, plan, 4));
  ASSERT_EQ(tree.size(), d);
  EXPECT_EQ(tree.node(0).node_id, "n0");
  for (size_t i = 1; i <= d; ++i) EXPECT_EQ(tree.parent(i), 0);
}

TEST(SimulateCascade, ExactSizeWithTeleport) {
  SynthParams p = SmallParams();
  const SyntheticNetwork net = GenerateSocialGraph(p, 1);
  CascadePlan plan;
  plan.cascade_id = "big";
  plan.root = 17;
  plan.target_size = 2500;
  p.reshare_prob = 0.01;
  const CascadeTree tree = BuildCascade(SimulateCascade(net, p, plan, 3));
  EXPECT_EQ(tree.size(), 2500u);
  plan.target_size = 3000;
  EXPECT_EQ(CodeOf([&] { SimulateCascade(net, p, plan, 3); }),
            ErrorCode::kBadParams);
}

TEST(SimulateCascades, ValidDeterministicAndThreadIndependent) {
  SynthParams p = SmallParams();
  p.n_clusters = 3;
  p.cluster_size = 5;
  const SyntheticNetwork net = GenerateSocialGraph(p, 1);
  const auto one = SimulateCascades(net, p, 11, 1);
  const auto four = SimulateCascades(net, p, 11, 4);
  ASSERT_EQ(one.size(), 315u);
  for (size_t c = 0; c < one.size(); ++c) {
    EXPECT_EQ(one[c].events, four[c].events);
    EXPECT_EQ(one[c].content, four[c].content);
    const CascadeTree tree = BuildCascade(one[c].events);
    EXPECT_GE(tree.size(), 1u);
    EXPECT_EQ(tree.id(), one[c].content.cascade_id);
    for (const ReshareEvent& e : tree.nodes()) {
      ASSERT_TRUE(e.views_orig_cum.has_value());
      if (e.node_type == NodeType::kPage) {
        EXPECT_EQ(e.fan_count, e.outdeg);
      } else {
        EXPECT_EQ(*e.friend_count + *e.subscriber_count, e.outdeg);
      }
    }
  }
  EXPECT_EQ(one[0].content.cascade_id, "c000000");
  EXPECT_FALSE(one[0].content.cluster_id.has_value());
  EXPECT_EQ(one[300].content.cluster_id, "cl00000");
  EXPECT_EQ(one[300].content.cascade_id, "x00000_000");
  // Members share their content apart from the id.
  ContentRecord a = one[300].content, b = one[301].content;
  a.cascade_id = b.cascade_id = "";
  EXPECT_EQ(a, b);
  EXPECT_NE(SimulateCascades(net, p, 12, 1)[0].events, one[0].events);
}

TEST(SimulateCascades, ClusterWinnerIsUniqueLargest) {
  SynthParams p = SmallParams();
  p.n_cascades = 0;
  p.n_clusters = 20;
  const SyntheticNetwork net = GenerateSocialGraph(p, 1);
  const auto cascades = SimulateCascades(net, p, 2, 1);
  for (size_t g = 0; g < 20; ++g) {
    std::vector<size_t> sizes;
    for (size_t j = 0; j < 10; ++j) {
      sizes.push_back(cascades[g * 10 + j].events.size() - 1);
    }
    const size_t best = *std::max_element(sizes.begin(), sizes.end());
    EXPECT_EQ(std::count(sizes.begin(), sizes.end(), best), 1) << g;
  }
}

TEST(SimulateCascades, HundredThousandCascadesParseWithMedianNearTen) {
  SynthParams p;
  p.n_cascades = 100000;
  p.seed = 23;
  const SyntheticNetwork net = GenerateSocialGraph(p, DeriveSeed(p.seed, 0));
  std::vector<double> sizes;
  size_t failures = 0;
  for (auto& c : SimulateCascades(net, p, DeriveSeed(p.seed, 1), 2)) {
    try {
      const CascadeTree tree = BuildCascade(std::move(c.events));
      if (tree.size() >= 5) sizes.push_back(static_cast<double>(tree.size()));
    } catch (const Error&) {
      ++failures;
    }
  }
  EXPECT_EQ(failures, 0u);
  const double median = Median(sizes);
  EXPECT_GE(median, 9.0);
  EXPECT_LE(median, 11.0);
}

class SynthDatasetTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SynthParams p;
    p.n_cascades = 10000;
    p.seed = 17;
    const SyntheticNetwork net = GenerateSocialGraph(p, DeriveSeed(p.seed, 0));
    for (auto& c : SimulateCascades(net, p, DeriveSeed(p.seed, 1), 2)) {
      cascades_->push_back({BuildCascade(std::move(c.events)), c.content});
    }
  }
  static void TearDownTestSuite() { cascades_->clear(); }
  static inline std::vector<Cascade>* cascades_ = new std::vector<Cascade>();
};

TEST_F(SynthDatasetTest, MedianOfSizesAboveFiveNearTen) {
  std::vector<double> sizes;
  for (const Cascade& c : *cascades_) {
    if (c.tree.size() >= 5) sizes.push_back(static_cast<double>(c.tree.size()));
  }
  const double median = Median(sizes);
  EXPECT_GE(median, 9.0);
  EXPECT_LE(median, 11.0);
}

TEST_F(SynthDatasetTest, PlantedSignalCorrelatesWithSize) {
  std::vector<double> second_half, log_size;
  for (const Cascade& c : *cascades_) {
    if (c.tree.size() < 5) continue;
    const FeatureVector fv = ExtractFeatures(c.tree, 5, nullptr, nullptr);
    second_half.push_back(fv.Get("gap_avg_second_half").value);
    log_size.push_back(std::log(static_cast<double>(c.tree.size())));
  }
  EXPECT_LE(Pearson(second_half, log_size), -0.2);
}

TEST_F(SynthDatasetTest, PlantedRateFeatureOutranksContentNoise) {
  TaskOptions options;
  options.threads = 2;
  std::vector<Cascade> subset(cascades_->begin(), cascades_->begin() + 4000);
  const LabeledTask task = LabelGrowth(subset, 5, options);
  const auto ranking = RankSingleFeaturePredictors(task.examples, 10, 3, 0.01, 2);
  size_t rate_rank = ranking.size(), best_noise = ranking.size();
  for (size_t i = 0; i < ranking.size(); ++i) {
    const std::string& name = ranking[i].feature;
    if (name == "gap_avg_second_half") rate_rank = i;
    if (name.rfind("score_", 0) == 0 || name.rfind("liwc_", 0) == 0) {
      best_noise = std::min(best_noise, i);
    }
  }
  EXPECT_LT(rate_rank, best_noise);
}

}  // namespace
}  // namespace cascade
