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

// Diffusion-tree model: reshare events, validated cascade trees and the
// social graph they spread over.

#ifndef CASCADE_CASCADE_MODEL_H_
#define CASCADE_CASCADE_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cascade {

enum class NodeType { kUser, kPage };
enum class Gender { kFemale, kMale, kOther };

std::string_view NodeTypeName(NodeType type);
NodeType ParseNodeType(std::string_view text);
std::string_view GenderName(Gender gender);
Gender ParseGender(std::string_view text);

// One node of a cascade. Optional fields stay absent (never zero) until
// feature encoding.
struct ReshareEvent {
  std::string cascade_id;
  std::string node_id;
  std::optional<std::string> parent_id;  // absent only for the root
  double timestamp = 0.0;                // seconds since the cascade epoch
  NodeType node_type = NodeType::kUser;
  int64_t outdeg = 0;  // friend + subscriber + fan count
  std::optional<int64_t> friend_count;
  std::optional<int64_t> fan_count;
  std::optional<int64_t> subscriber_count;
  std::optional<double> age_years;
  std::optional<double> fb_age_days;
  std::optional<double> activity_days;
  std::optional<Gender> gender;
  // Cumulative impressions of the original post, and of the earlier
  // reshares, at the time of this event.
  std::optional<int64_t> views_orig_cum;
  std::optional<int64_t> views_reshares_cum;

  bool operator==(const ReshareEvent&) const = default;
};

// Immutable, validated diffusion tree. Node 0 is the root; node i (i >= 1) is
// the i-th reshare in time order. Every parent precedes its children, so the
// first k+1 nodes always form a closed subtree.
class CascadeTree {
 public:
  const std::string& id() const { return nodes_.front().cascade_id; }

  // Number of reshares; the root is not counted.
  size_t size() const { return nodes_.size() - 1; }
  size_t node_count() const { return nodes_.size(); }

  const ReshareEvent& node(size_t i) const { return nodes_[i]; }
  std::span<const ReshareEvent> nodes() const { return nodes_; }

  // -1 for the root.
  int32_t parent(size_t i) const { return parents_[i]; }
  std::span<const int32_t> parents() const { return parents_; }

  int32_t depth(size_t i) const { return depths_[i]; }
  std::span<const int32_t> depths() const { return depths_; }

  // Raw root timestamp before timestamps were re-based to the root.
  double origin_time() const { return origin_time_; }

  bool operator==(const CascadeTree&) const = default;

 private:
  friend CascadeTree BuildCascade(std::vector<ReshareEvent> events);
  friend CascadeTree Prefix(const CascadeTree& tree, size_t k);

  CascadeTree() = default;

  std::vector<ReshareEvent> nodes_;
  std::vector<int32_t> parents_;
  std::vector<int32_t> depths_;
  double origin_time_ = 0.0;
};

// Validates the events of one cascade and orders reshares by
// (timestamp, depth, node_id). Timestamps are re-based so the root is 0.
// Throws Error with kNoRoot, kMultipleRoots, kDanglingParent, kCycleDetected,
// kNegativeTimestamp, kDuplicateNode, kTimeOrderViolation or kMixedCascades.
CascadeTree BuildCascade(std::vector<ReshareEvent> events);

// Root plus the first k reshares. Throws kKTooLarge when k > tree.size().
CascadeTree Prefix(const CascadeTree& tree, size_t k);

// Groups events by cascade_id and builds every cascade. Output is sorted by
// cascade id. Independent cascades are built on up to `threads` workers.
std::vector<CascadeTree> BuildCascades(std::vector<ReshareEvent> events,
                                       int threads = 1);

// Adjacency over opaque node ids. Undirected graphs store each edge in both
// directions; a directed edge (u, v) means v sees what u posts.
class SocialGraph {
 public:
  using NodeIndex = uint32_t;

  explicit SocialGraph(bool directed = false) : directed_(directed) {}

  bool directed() const { return directed_; }

  NodeIndex AddNode(std::string_view id);
  // Self-loops are ignored and duplicate edges collapse.
  void AddEdge(std::string_view from, std::string_view to);

  std::optional<NodeIndex> Find(std::string_view id) const;
  const std::string& Name(NodeIndex index) const { return names_[index]; }

  // Sorted out-neighbors.
  std::span<const NodeIndex> Neighbors(NodeIndex index) const {
    return adjacency_[index];
  }
  bool HasEdge(std::string_view from, std::string_view to) const;
  bool HasEdge(NodeIndex from, NodeIndex to) const;
  size_t OutDegree(NodeIndex index) const { return adjacency_[index].size(); }

  size_t node_count() const { return names_.size(); }
  size_t edge_count() const { return edge_count_; }

  // Edges in canonical order; undirected edges are listed once with the
  // smaller id first.
  std::vector<std::pair<std::string, std::string>> Edges() const;

 private:
  bool InsertArc(NodeIndex from, NodeIndex to);

  bool directed_;
  std::map<std::string, NodeIndex, std::less<>> index_;
  std::vector<std::string> names_;
  std::vector<std::vector<NodeIndex>> adjacency_;
  size_t edge_count_ = 0;
};

// Social graph restricted to the root and the first k resharers. Every
// participant is present as a node even when isolated.
SocialGraph InducedSubgraph(const CascadeTree& tree, const SocialGraph& graph,
                            size_t k);

}  // namespace cascade

#endif  // CASCADE_CASCADE_MODEL_H_
