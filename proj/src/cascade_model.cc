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

#include "cascade/cascade_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "cascade/error.h"
#include "cascade/parallel.h"

namespace cascade {

std::string_view NodeTypeName(NodeType type) {
  return type == NodeType::kPage ? "page" : "user";
}

NodeType ParseNodeType(std::string_view text) {
  if (text == "user") return NodeType::kUser;
  if (text == "page") return NodeType::kPage;
  throw Error(ErrorCode::kParse,
              "node_type must be 'user' or 'page', got '" + std::string(text) +
                  "'");
}

std::string_view GenderName(Gender gender) {
  switch (gender) {
    case Gender::kFemale: return "female";
    case Gender::kMale: return "male";
    case Gender::kOther: return "other";
  }
  return "other";
}

Gender ParseGender(std::string_view text) {
  if (text == "female" || text == "f") return Gender::kFemale;
  if (text == "male" || text == "m") return Gender::kMale;
  if (text == "other") return Gender::kOther;
  throw Error(ErrorCode::kParse, "unknown gender '" + std::string(text) + "'");
}

CascadeTree BuildCascade(std::vector<ReshareEvent> events) {
  if (events.empty()) throw Error(ErrorCode::kNoRoot, "cascade has no events");
  const std::string& cascade_id = events.front().cascade_id;
  const size_t n = events.size();

  size_t root = n;
  std::unordered_map<std::string, size_t> by_id;
  by_id.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const ReshareEvent& e = events[i];
    if (e.cascade_id != cascade_id) {
      throw Error(ErrorCode::kMixedCascades,
                  "events from cascades '" + cascade_id + "' and '" +
                      e.cascade_id + "' passed together");
    }
    if (!e.parent_id) {
      if (root != n) {
        throw Error(ErrorCode::kMultipleRoots,
                    "cascade '" + cascade_id + "' has roots '" +
                        events[root].node_id + "' and '" + e.node_id + "'");
      }
      root = i;
    }
    if (!by_id.emplace(e.node_id, i).second) {
      throw Error(ErrorCode::kDuplicateNode, "cascade '" + cascade_id +
                                                 "' repeats node '" +
                                                 e.node_id + "'");
    }
    if (!(e.timestamp >= 0.0) || !std::isfinite(e.timestamp)) {
      throw Error(ErrorCode::kNegativeTimestamp,
                  "node '" + e.node_id + "' has timestamp " +
                      std::to_string(e.timestamp));
    }
  }
  if (root == n) {
    throw Error(ErrorCode::kNoRoot,
                "cascade '" + cascade_id + "' has no event without parent_id");
  }

  std::vector<size_t> parent(n, n);
  std::vector<std::vector<size_t>> children(n);
  for (size_t i = 0; i < n; ++i) {
    if (i == root) continue;
    auto it = by_id.find(*events[i].parent_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kDanglingParent,
                  "node '" + events[i].node_id + "' references missing parent '" +
                      *events[i].parent_id + "'");
    }
    parent[i] = it->second;
    children[it->second].push_back(i);
  }

  // With exactly one root and no dangling parents, any node unreachable from
  // the root sits on a cycle.
  std::vector<int32_t> depth(n, -1);
  std::vector<size_t> queue{root};
  depth[root] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const size_t u = queue[head];
    for (size_t c : children[u]) {
      depth[c] = depth[u] + 1;
      queue.push_back(c);
    }
  }
  if (queue.size() != n) {
    for (size_t i = 0; i < n; ++i) {
      if (depth[i] < 0) {
        throw Error(ErrorCode::kCycleDetected,
                    "node '" + events[i].node_id + "' of cascade '" +
                        cascade_id + "' lies on a parent cycle");
      }
    }
  }

  const double origin = events[root].timestamp;
  for (size_t i = 0; i < n; ++i) {
    events[i].timestamp -= origin;
    if (events[i].timestamp < 0.0) {
      throw Error(ErrorCode::kNegativeTimestamp,
                  "node '" + events[i].node_id + "' precedes the root in time");
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (i != root && events[i].timestamp < events[parent[i]].timestamp) {
      throw Error(ErrorCode::kTimeOrderViolation,
                  "node '" + events[i].node_id +
                      "' is timestamped before its parent");
    }
  }

  // Depth breaks timestamp ties before node_id so a parent sharing its
  // child's timestamp still comes first.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::tie(events[a].timestamp, depth[a], events[a].node_id) <
           std::tie(events[b].timestamp, depth[b], events[b].node_id);
  });
  std::vector<int32_t> position(n);
  for (size_t i = 0; i < n; ++i) position[order[i]] = static_cast<int32_t>(i);

  CascadeTree tree;
  tree.origin_time_ = origin;
  tree.nodes_.reserve(n);
  tree.parents_.reserve(n);
  tree.depths_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t src = order[i];
    tree.parents_.push_back(src == root ? -1 : position[parent[src]]);
    tree.depths_.push_back(depth[src]);
    tree.nodes_.push_back(std::move(events[src]));
  }
  return tree;
}

CascadeTree Prefix(const CascadeTree& tree, size_t k) {
  if (k > tree.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds size " +
                    std::to_string(tree.size()) + " of cascade '" + tree.id() +
                    "'");
  }
  CascadeTree prefix;
  prefix.origin_time_ = tree.origin_time_;
  prefix.nodes_.assign(tree.nodes_.begin(), tree.nodes_.begin() + k + 1);
  prefix.parents_.assign(tree.parents_.begin(), tree.parents_.begin() + k + 1);
  prefix.depths_.assign(tree.depths_.begin(), tree.depths_.begin() + k + 1);
  return prefix;
}

std::vector<CascadeTree> BuildCascades(std::vector<ReshareEvent> events,
                                       int threads) {
  std::map<std::string, std::vector<ReshareEvent>> grouped;
  for (auto& e : events) {
    std::string id = e.cascade_id;
    grouped[std::move(id)].push_back(std::move(e));
  }
  std::vector<std::vector<ReshareEvent>> groups;
  groups.reserve(grouped.size());
  for (auto& [id, group] : grouped) groups.push_back(std::move(group));

  std::vector<std::optional<CascadeTree>> built(groups.size());
  ParallelFor(groups.size(), threads, [&](size_t i) {
    built[i] = BuildCascade(std::move(groups[i]));
  });
  std::vector<CascadeTree> trees;
  trees.reserve(built.size());
  for (auto& t : built) trees.push_back(std::move(*t));
  return trees;
}

SocialGraph::NodeIndex SocialGraph::AddNode(std::string_view id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  const auto index = static_cast<NodeIndex>(names_.size());
  index_.emplace(std::string(id), index);
  names_.emplace_back(id);
  adjacency_.emplace_back();
  return index;
}

bool SocialGraph::InsertArc(NodeIndex from, NodeIndex to) {
  auto& list = adjacency_[from];
  auto it = std::lower_bound(list.begin(), list.end(), to);
  if (it != list.end() && *it == to) return false;
  list.insert(it, to);
  return true;
}

void SocialGraph::AddEdge(std::string_view from, std::string_view to) {
  const NodeIndex a = AddNode(from);
  const NodeIndex b = AddNode(to);
  if (a == b) return;
  if (InsertArc(a, b)) ++edge_count_;
  if (!directed_) InsertArc(b, a);
}

std::optional<SocialGraph::NodeIndex> SocialGraph::Find(
    std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SocialGraph::HasEdge(NodeIndex from, NodeIndex to) const {
  const auto& list = adjacency_[from];
  return std::binary_search(list.begin(), list.end(), to);
}

bool SocialGraph::HasEdge(std::string_view from, std::string_view to) const {
  auto a = Find(from);
  auto b = Find(to);
  return a && b && HasEdge(*a, *b);
}

std::vector<std::pair<std::string, std::string>> SocialGraph::Edges() const {
  std::vector<std::pair<std::string, std::string>> edges;
  edges.reserve(edge_count_);
  for (NodeIndex u = 0; u < adjacency_.size(); ++u) {
    for (NodeIndex v : adjacency_[u]) {
      if (directed_ || names_[u] < names_[v]) {
        edges.emplace_back(names_[u], names_[v]);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

SocialGraph InducedSubgraph(const CascadeTree& tree, const SocialGraph& graph,
                            size_t k) {
  if (k > tree.size()) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " exceeds size " +
                    std::to_string(tree.size()) + " of cascade '" + tree.id() +
                    "'");
  }
  SocialGraph sub(graph.directed());
  std::unordered_set<SocialGraph::NodeIndex> members;
  for (size_t i = 0; i <= k; ++i) {
    sub.AddNode(tree.node(i).node_id);
    if (auto index = graph.Find(tree.node(i).node_id)) members.insert(*index);
  }
  for (size_t i = 0; i <= k; ++i) {
    auto u = graph.Find(tree.node(i).node_id);
    if (!u) continue;
    for (SocialGraph::NodeIndex v : graph.Neighbors(*u)) {
      if (members.count(v)) sub.AddEdge(graph.Name(*u), graph.Name(v));
    }
  }
  return sub;
}

}  // namespace cascade
