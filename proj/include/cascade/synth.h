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

// Synthetic social graphs and reshare cascades with heavy-tailed sizes and a
// planted temporal signal.

#ifndef CASCADE_SYNTH_H_
#define CASCADE_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cascade/cascade_model.h"
#include "cascade/features.h"
#include "cascade/text_io.h"

namespace cascade {

struct SynthParams {
  int64_t n_nodes = 20000;
  int64_t attachment_m = 3;       // edges per new node
  double page_fraction = 0.05;
  double page_degree_boost = 4.0;  // stub multiplicity of pages
  double reshare_prob = 0.1;
  // Hazard multiplier for reshare i of a cascade whose drawn size is at
  // least 2i.
  double rate_boost = 3.0;
  double target_alpha = 2.0;
  double x_min = 5.0;
  int64_t n_cascades = 10000;
  uint64_t seed = 1;

  double mean_delay = 600.0;  // seconds, unboosted inter-reshare delay
  int64_t max_size = 5000;    // cap on drawn sizes
  // Same-content clusters appended after the regular cascades. In each, only
  // the largest member is boosted (on every reshare).
  int64_t n_clusters = 0;
  int64_t cluster_size = 10;

  bool operator==(const SynthParams&) const = default;
};

// Throws kBadParams on out-of-range values.
void ValidateSynthParams(const SynthParams& params);
// Unknown keys throw kConfigInvalid.
SynthParams ParseSynthParams(const KeyValueDocument& doc);
KeyValueDocument SynthParamsDocument(const SynthParams& params);

// Inverse CDF of the continuous power law: x_min * u^(-1/(alpha-1)).
double PowerLawFromUniform(double alpha, double x_min, double u);

// n i.i.d. draws, u uniform on (0, 1]. Throws kAlphaOutOfRange.
std::vector<double> SamplePowerLawSizes(double alpha, double x_min, size_t n,
                                        uint64_t seed);

struct SyntheticNetwork {
  SocialGraph graph{false};
  std::vector<NodeType> node_types;  // by node index; ids are "n<index>"
};

std::string SyntheticNodeId(size_t index);

// Preferential attachment seeded by a clique of attachment_m + 1 nodes.
// Pages enter the attachment pool page_degree_boost times per edge.
SyntheticNetwork GenerateSocialGraph(const SynthParams& params, uint64_t seed);

struct SyntheticCascade {
  std::vector<ReshareEvent> events;
  ContentRecord content;
};

enum class BoostMode { kByDestinedSize, kAll, kNone };

// Everything needed to grow one cascade.
struct CascadePlan {
  std::string cascade_id;
  size_t root = 0;
  size_t target_size = 1;
  BoostMode boost = BoostMode::kByDestinedSize;
};

// Grows one cascade to exactly plan.target_size reshares. Exposed neighbors
// reshare with reshare_prob; when exposures run out a random non-participant
// joins under a random participant.
std::vector<ReshareEvent> SimulateCascade(const SyntheticNetwork& network,
                                          const SynthParams& params,
                                          const CascadePlan& plan,
                                          uint64_t seed);

// n_cascades regular cascades followed by n_clusters * cluster_size cluster
// members. Each cascade uses a seed derived from (seed, index).
std::vector<SyntheticCascade> SimulateCascades(const SyntheticNetwork& network,
                                               const SynthParams& params,
                                               uint64_t seed, int threads = 1);

}  // namespace cascade

#endif  // CASCADE_SYNTH_H_
