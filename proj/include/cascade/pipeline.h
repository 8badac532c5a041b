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

// File-level steps behind the command-line tool: generate, featurize, label,
// train, evaluate, report, and a config-driven run that chains them and
// writes a manifest.

#ifndef CASCADE_PIPELINE_H_
#define CASCADE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cascade/cascade_model.h"
#include "cascade/learner.h"
#include "cascade/synth.h"
#include "cascade/tasks.h"
#include "cascade/text_io.h"

namespace cascade {

inline constexpr char kVersion[] = "1.0.0";

struct GenerateOutputs {
  std::filesystem::path events;
  std::filesystem::path graph;
  std::filesystem::path content;  // empty: not written
};

void RunGenerate(const SynthParams& params, int threads,
                 const GenerateOutputs& outputs);

struct DatasetInputs {
  std::filesystem::path events;
  std::filesystem::path graph;    // empty: no social graph
  std::filesystem::path content;  // empty: no content records
  bool directed = false;
};

struct Dataset {
  std::vector<Cascade> cascades;
  std::optional<SocialGraph> graph;
};

Dataset LoadDataset(const DatasetInputs& inputs, int threads);

// Features at k, one row per cascade with at least k reshares:
// cascade_id, final_size, encoded features. Writes `<out>.meta` alongside.
void RunFeaturize(const Dataset& dataset, size_t k,
                  const FeatureOptions& features, int threads,
                  const std::filesystem::path& out);

enum class LabelKind { kGrowth, kStructure, kCluster };
LabelKind ParseLabelKind(std::string_view text);

struct LabelOptions {
  LabelKind kind = LabelKind::kGrowth;
  size_t k = 5;
  std::optional<size_t> r;  // growth only
  size_t m = 10;            // cluster only
  bool quartiles = false;
  uint64_t seed = 0;
  FeatureOptions features;
  int threads = 1;
};

// Columns: encoded features, label, final_size, cascade_id, and cluster_id
// for the cluster task (label 1 marks the winner). Writes `<out>.meta`.
void RunLabel(const Dataset& dataset, const LabelOptions& options,
              const std::filesystem::path& out);

// A labeled CSV read back into memory.
struct LabeledTable {
  DesignMatrix design;
  std::vector<std::string> cluster_ids;  // empty without a cluster_id column
};

void WriteLabeledTable(std::ostream& out, const LabeledTable& table);
LabeledTable ReadLabeledTable(std::istream& in, std::string_view origin);
LabeledTable ReadLabeledTable(const std::filesystem::path& path);

std::string FormatMetricsTable(const Metrics& metrics);
void WriteFoldCsv(std::ostream& out, const Metrics& metrics);

// Scores a fitted model on a table as a single held-out fold.
Metrics EvaluateModel(const Model& model, const LabeledTable& table);
// Rebuilds cluster instances from cluster_id and label columns.
ClusterEvaluation EvaluateClusterTable(const Model& model,
                                       const LabeledTable& table);

// Cross-validation over whole clusters: each fold trains a winner-vs-rest
// model on the other folds' rows and ranks its own held-out clusters. Winner
// ranks are pooled over every cluster. Throws kTooFewExamples when there are
// fewer clusters than folds.
ClusterEvaluation CrossValidateClusters(const LabeledTable& table, int folds,
                                        double lambda, uint64_t seed);

void WriteRankingCsv(std::ostream& out,
                     const std::vector<FeaturePredictor>& ranking);

struct ReportOptions {
  std::vector<size_t> k_values = {1, 2, 3, 4, 5, 10, 25};
  size_t ranking_k = 5;
  int folds = 10;
  double lambda = 0.01;
  uint64_t seed = 0;
  FeatureOptions features;
  int threads = 1;
};

// Writes accuracy_vs_k.csv, feature_ranking.csv and group_<field>.csv for
// every grouping field the data can support. Returns the written files.
std::vector<std::filesystem::path> RunReport(
    const Dataset& dataset, const ReportOptions& options,
    const std::filesystem::path& out_dir);

// Config-driven run. Recognized keys:
//   steps      comma list from generate,featurize,label,train,evaluate,report
//   seed, k, task, R, m, quartiles, lambda, folds, centered_slopes,
//   report_k, events, graph, content, directed, and synth.<param> for every
//   SynthParams field.
// Relative paths resolve against the config file's directory; outputs go to
// out_dir. Writes manifest.txt listing the resolved configuration, inputs and
// output digests. Throws kConfigInvalid on unknown keys or values.
struct RunResult {
  std::vector<std::filesystem::path> outputs;  // relative to out_dir
  std::optional<Metrics> metrics;
};

RunResult RunPipeline(const KeyValueDocument& config,
                      const std::filesystem::path& base_dir,
                      const std::filesystem::path& out_dir, int threads,
                      std::optional<uint64_t> seed_override = std::nullopt);

}  // namespace cascade

#endif  // CASCADE_PIPELINE_H_
