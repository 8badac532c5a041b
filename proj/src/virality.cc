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

#include "cascade/virality.h"

#include <algorithm>
#include <string>
#include <vector>

#include "cascade/error.h"

namespace cascade {
namespace {

void CheckSize(const CascadeTree& tree) {
  if (tree.node_count() < 2) {
    throw Error(ErrorCode::kTooSmall,
                "cascade '" + tree.id() +
                    "' has a single node; pairwise distance is undefined");
  }
}

}  // namespace

double WienerIndex(const CascadeTree& tree) {
  CheckSize(tree);
  const size_t n = tree.node_count();
  // Parents precede children, so a reverse sweep is a post-order.
  std::vector<double> subtree(n, 1.0);
  double total = 0.0;
  for (size_t i = n - 1; i >= 1; --i) {
    const double s = subtree[i];
    total += s * (static_cast<double>(n) - s);
    subtree[tree.parent(i)] += s;
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return total / pairs;
}

double WienerIndexBruteForce(const CascadeTree& tree) {
  CheckSize(tree);
  const size_t n = tree.node_count();
  std::vector<std::vector<size_t>> adjacency(n);
  for (size_t i = 1; i < n; ++i) {
    adjacency[i].push_back(tree.parent(i));
    adjacency[tree.parent(i)].push_back(i);
  }
  double ordered_total = 0.0;
  std::vector<int64_t> dist(n);
  std::vector<size_t> queue;
  queue.reserve(n);
  for (size_t source = 0; source < n; ++source) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
      const size_t u = queue[head];
      ordered_total += static_cast<double>(dist[u]);
      for (size_t v : adjacency[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return ordered_total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace cascade
