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

// Structural virality: the Wiener index (mean pairwise hop distance) of a
// cascade tree.

#ifndef CASCADE_VIRALITY_H_
#define CASCADE_VIRALITY_H_

#include "cascade/cascade_model.h"

namespace cascade {

// Linear time: each edge contributes s * (n - s) pairs, where s is the size
// of the subtree below it. Throws kTooSmall for fewer than two nodes.
double WienerIndex(const CascadeTree& tree);

// Breadth-first search from every node. O(n^2); a test oracle for
// WienerIndex on small trees.
double WienerIndexBruteForce(const CascadeTree& tree);

}  // namespace cascade

#endif  // CASCADE_VIRALITY_H_
