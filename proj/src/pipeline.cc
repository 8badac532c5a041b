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

#include "cascade/pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cascade/error.h"
#include "cascade/io.h"
#include "cascade/random.h"
#include "cascade/virality.h"

namespace cascade {
namespace {

namespace fs = std::filesystem;

std::string Meta(const fs::path& path) { return path.string() + ".meta"; }

void WriteMeta(const fs::path& path, const KeyValueDocument& doc) {
  std::ofstream out = OpenOutput(Meta(path));
  doc.Write(out);
}

std::string FormatSize(size_t value) { return std::to_string(value); }

double MajorityFraction(std::span<const int> y) {
  size_t positives = 0;
  for (int label : y) positives += label == 1;
  const size_t majority = std::max(positives, y.size() - positives);
  return static_cast<double>(majority) / static_cast<double>(y.size());
}

DesignMatrix DesignFromRows(const std::vector<FeatureRow>& rows) {
  DesignMatrix design;
  if (rows.empty()) return design;
  design.names = rows.front().features.EncodedNames();
  design.x = Matrix(rows.size(), design.names.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].features.EncodedNames() != design.names) {
      throw Error(ErrorCode::kMissingFeature,
                  "cascade " + rows[i].cascade_id +
                      " has a different feature set");
    }
    const std::vector<double> values = rows[i].features.EncodedValues();
    std::copy(values.begin(), values.end(), design.x.row(i).begin());
    design.final_sizes.push_back(static_cast<double>(rows[i].final_size));
    design.cascade_ids.push_back(rows[i].cascade_id);
  }
  return design;
}

LabeledTable ClusterTable(std::span<const ClusterInstance> instances) {
  std::vector<LabeledExample> examples;
  std::vector<std::string> cluster_ids;
  for (const ClusterInstance& instance : instances) {
    for (size_t i = 0; i < instance.members.size(); ++i) {
      const ClusterMember& member = instance.members[i];
      LabeledExample ex;
      ex.cascade_id = member.cascade_id;
      ex.features = member.features;
      ex.label = i == instance.winner_index ? 1 : 0;
      ex.final_size = member.final_size;
      examples.push_back(std::move(ex));
      cluster_ids.push_back(instance.cluster_id);
    }
  }
  LabeledTable table;
  table.design = ToDesignMatrix(examples);
  table.cluster_ids = std::move(cluster_ids);
  return table;
}

void AddTaskMeta(const LabeledTask& task, KeyValueDocument* meta) {
  size_t positives = 0;
  for (const auto& ex : task.examples) positives += ex.label;
  meta->Add("threshold", FormatDouble(task.threshold));
  meta->Add("retained", FormatSize(task.retained));
  meta->Add("examples", FormatSize(task.examples.size()));
  meta->Add("positives", FormatSize(positives));
  meta->Add("positive_fraction", FormatDouble(task.positive_fraction));
  for (const std::string& warning : task.warnings) meta->Add("warning", warning);
}

}  // namespace

void RunGenerate(const SynthParams& params, int threads,
                 const GenerateOutputs& outputs) {
  ValidateSynthParams(params);
  const SyntheticNetwork network =
      GenerateSocialGraph(params, DeriveSeed(params.seed, 0));
  const std::vector<SyntheticCascade> cascades =
      SimulateCascades(network, params, DeriveSeed(params.seed, 1), threads);

  std::ofstream events = OpenOutput(outputs.events);
  for (const SyntheticCascade& c : cascades) WriteEventsJsonl(events, c.events);
  std::ofstream graph = OpenOutput(outputs.graph);
  WriteEdgeList(graph, network.graph);
  if (!outputs.content.empty()) {
    std::vector<ContentRecord> content;
    content.reserve(cascades.size());
    for (const SyntheticCascade& c : cascades) content.push_back(c.content);
    std::ofstream out = OpenOutput(outputs.content);
    WriteContentJsonl(out, content);
  }
}

Dataset LoadDataset(const DatasetInputs& inputs, int threads) {
  Dataset dataset;
  std::vector<CascadeTree> trees =
      BuildCascades(ReadEvents(inputs.events), threads);
  std::vector<ContentRecord> content;
  if (!inputs.content.empty()) content = ReadContent(inputs.content);
  dataset.cascades = AssembleCascades(std::move(trees), content);
  if (!inputs.graph.empty()) {
    dataset.graph = ReadEdgeList(inputs.graph, inputs.directed);
  }
  return dataset;
}

void RunFeaturize(const Dataset& dataset, size_t k,
                  const FeatureOptions& features, int threads,
                  const fs::path& out) {
  TaskOptions options;
  options.graph = dataset.graph ? &*dataset.graph : nullptr;
  options.features = features;
  options.threads = threads;
  const std::vector<FeatureRow> rows =
      ExtractAllFeatures(dataset.cascades, k, options);
  const DesignMatrix design = DesignFromRows(rows);

  std::ofstream csv = OpenOutput(out);
  std::vector<std::string> fields = {"cascade_id", "final_size"};
  fields.insert(fields.end(), design.names.begin(), design.names.end());
  WriteCsvRow(csv, fields);
  for (size_t i = 0; i < rows.size(); ++i) {
    fields.clear();
    fields.push_back(rows[i].cascade_id);
    fields.push_back(FormatSize(rows[i].final_size));
    for (double v : design.x.row(i)) fields.push_back(FormatDouble(v));
    WriteCsvRow(csv, fields);
  }

  bool approximate = false;
  for (const FeatureRow& row : rows) {
    approximate = approximate || row.features.did_leave_approximate;
  }
  KeyValueDocument meta;
  meta.Add("k", FormatSize(k));
  meta.Add("rows", FormatSize(rows.size()));
  meta.Add("skipped", FormatSize(dataset.cascades.size() - rows.size()));
  meta.Add("graph", dataset.graph ? "true" : "false");
  meta.Add("centered_slopes", features.centered_slopes ? "true" : "false");
  meta.Add("did_leave_approximate", approximate ? "true" : "false");
  WriteMeta(out, meta);
}

LabelKind ParseLabelKind(std::string_view text) {
  if (text == "growth") return LabelKind::kGrowth;
  if (text == "structure") return LabelKind::kStructure;
  if (text == "cluster") return LabelKind::kCluster;
  throw Error(ErrorCode::kConfigInvalid,
              "unknown task '" + std::string(text) +
                  "' (expected growth, structure or cluster)");
}

void RunLabel(const Dataset& dataset, const LabelOptions& options,
              const fs::path& out) {
  TaskOptions task_options;
  task_options.graph = dataset.graph ? &*dataset.graph : nullptr;
  task_options.features = options.features;
  task_options.quartiles = options.quartiles;
  task_options.threads = options.threads;

  KeyValueDocument meta;
  LabeledTable table;
  switch (options.kind) {
    case LabelKind::kGrowth:
    case LabelKind::kStructure: {
      LabeledTask task;
      if (options.kind == LabelKind::kStructure) {
        meta.Add("task", "structure");
        task = LabelStructure(dataset.cascades, options.k, task_options);
      } else {
        meta.Add("task", "growth");
        task = options.r ? LabelGrowthFixedR(dataset.cascades, options.k,
                                             *options.r, task_options)
                         : LabelGrowth(dataset.cascades, options.k,
                                       task_options);
      }
      meta.Add("k", FormatSize(options.k));
      if (options.r) meta.Add("R", FormatSize(*options.r));
      meta.Add("quartiles", options.quartiles ? "true" : "false");
      meta.Add("seed", std::to_string(options.seed));
      AddTaskMeta(task, &meta);
      table.design = ToDesignMatrix(task.examples);
      break;
    }
    case LabelKind::kCluster: {
      const std::vector<ClusterInstance> instances =
          BuildClusterTask(dataset.cascades, options.k, options.m,
                           options.seed, task_options);
      meta.Add("task", "cluster");
      meta.Add("k", FormatSize(options.k));
      meta.Add("m", FormatSize(options.m));
      meta.Add("seed", std::to_string(options.seed));
      meta.Add("instances", FormatSize(instances.size()));
      table = ClusterTable(instances);
      break;
    }
  }
  std::ofstream csv = OpenOutput(out);
  WriteLabeledTable(csv, table);
  WriteMeta(out, meta);
}

void WriteLabeledTable(std::ostream& out, const LabeledTable& table) {
  const DesignMatrix& d = table.design;
  const bool clustered = !table.cluster_ids.empty();
  std::vector<std::string> fields = d.names;
  fields.insert(fields.end(), {"label", "final_size", "cascade_id"});
  if (clustered) fields.push_back("cluster_id");
  WriteCsvRow(out, fields);
  for (size_t i = 0; i < d.x.rows(); ++i) {
    fields.clear();
    for (double v : d.x.row(i)) fields.push_back(FormatDouble(v));
    fields.push_back(std::to_string(d.y[i]));
    fields.push_back(FormatDouble(d.final_sizes[i]));
    fields.push_back(d.cascade_ids[i]);
    if (clustered) fields.push_back(table.cluster_ids[i]);
    WriteCsvRow(out, fields);
  }
}

LabeledTable ReadLabeledTable(std::istream& in, std::string_view origin) {
  const std::string where(origin);
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.ReadRow(&header)) {
    throw Error(ErrorCode::kParse, where + ": empty file");
  }
  int label_col = -1, size_col = -1, id_col = -1, cluster_col = -1;
  std::vector<size_t> feature_cols;
  LabeledTable table;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    const int col = static_cast<int>(c);
    if (name == "label") label_col = col;
    else if (name == "final_size") size_col = col;
    else if (name == "cascade_id") id_col = col;
    else if (name == "cluster_id") cluster_col = col;
    else {
      feature_cols.push_back(c);
      table.design.names.push_back(name);
    }
  }
  if (label_col < 0 || size_col < 0 || id_col < 0) {
    throw Error(ErrorCode::kParse,
                where + ": needs label, final_size and cascade_id columns");
  }

  std::vector<double> values;
  std::vector<std::string> row;
  size_t rows = 0;
  while (reader.ReadRow(&row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw Error(ErrorCode::kParse, where + ":" +
                                         std::to_string(reader.line()) +
                                         ": wrong number of fields");
    }
    try {
      for (size_t c : feature_cols) values.push_back(ParseDouble(row[c]));
      const int64_t label = ParseInt(row[label_col]);
      if (label != 0 && label != 1) {
        throw Error(ErrorCode::kParse, "label must be 0 or 1");
      }
      table.design.y.push_back(static_cast<int>(label));
      table.design.final_sizes.push_back(ParseDouble(row[size_col]));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ":" +
                                         std::to_string(reader.line()) + ": " +
                                         e.detail());
    }
    table.design.cascade_ids.push_back(row[id_col]);
    if (cluster_col >= 0) table.cluster_ids.push_back(row[cluster_col]);
    ++rows;
  }
  table.design.x = Matrix(rows, feature_cols.size());
  for (size_t i = 0; i < rows; ++i) {
    std::copy_n(values.begin() + static_cast<ptrdiff_t>(i * feature_cols.size()),
                feature_cols.size(), table.design.x.row(i).begin());
  }
  return table;
}

LabeledTable ReadLabeledTable(const fs::path& path) {
  std::ifstream in = OpenInput(path);
  return ReadLabeledTable(in, path.string());
}

std::string FormatMetricsTable(const Metrics& metrics) {
  std::ostringstream out;
  out << "metric\tmean\tsd\n";
  out << "accuracy\t" << FormatDouble(metrics.accuracy_mean) << '\t'
      << FormatDouble(metrics.accuracy_sd) << '\n';
  out << "f1\t" << FormatDouble(metrics.f1_mean) << '\t'
      << FormatDouble(metrics.f1_sd) << '\n';
  out << "auc\t" << FormatDouble(metrics.auc_mean) << '\t'
      << FormatDouble(metrics.auc_sd) << '\n';
  out << "baseline_accuracy\t" << FormatDouble(metrics.baseline_accuracy)
      << "\t0\n";
  out << "folds\t" << metrics.folds.size() << "\t0\n";
  return out.str();
}

void WriteFoldCsv(std::ostream& out, const Metrics& metrics) {
  WriteCsvRow(out, std::vector<std::string>{"fold", "train_size", "test_size",
                                            "accuracy", "f1", "auc"});
  for (size_t f = 0; f < metrics.folds.size(); ++f) {
    const FoldMetrics& m = metrics.folds[f];
    WriteCsvRow(out, std::vector<std::string>{
                         std::to_string(f), FormatSize(m.train_size),
                         FormatSize(m.test_size), FormatDouble(m.accuracy),
                         FormatDouble(m.f1), FormatDouble(m.auc)});
  }
}

Metrics EvaluateModel(const Model& model, const LabeledTable& table) {
  const DesignMatrix& d = table.design;
  if (d.y.empty()) throw Error(ErrorCode::kEmpty, "no rows to evaluate");
  const std::vector<double> scores = PredictProba(model, d.x, d.names);
  std::vector<int> predictions(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) predictions[i] = scores[i] >= 0.5;

  FoldMetrics fold;
  fold.test_size = d.y.size();
  fold.accuracy = Accuracy(predictions, d.y);
  fold.f1 = F1(predictions, d.y);
  try {
    fold.auc = Auc(scores, d.y);
  } catch (const Error&) {
    fold.auc = std::nan("");
  }
  Metrics metrics;
  metrics.folds.push_back(fold);
  metrics.accuracy_mean = fold.accuracy;
  metrics.f1_mean = fold.f1;
  metrics.auc_mean = fold.auc;
  metrics.accuracy_sd = metrics.f1_sd = metrics.auc_sd = 0.0;
  metrics.baseline_accuracy = MajorityFraction(d.y);
  return metrics;
}

namespace {

struct ClusterRows {
  std::vector<ClusterInstance> instances;  // in order of first appearance
  std::vector<std::vector<size_t>> rows;   // table rows of each instance
};

ClusterRows GroupClusterRows(const LabeledTable& table) {
  const DesignMatrix& d = table.design;
  if (table.cluster_ids.empty()) {
    throw Error(ErrorCode::kBadParams, "table has no cluster_id column");
  }
  ClusterRows out;
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < d.y.size(); ++i) {
    auto [it, inserted] =
        index.emplace(table.cluster_ids[i], out.instances.size());
    if (inserted) {
      out.instances.emplace_back();
      out.instances.back().cluster_id = table.cluster_ids[i];
      out.rows.emplace_back();
    }
    ClusterInstance& instance = out.instances[it->second];
    ClusterMember member;
    member.cascade_id = d.cascade_ids[i];
    member.final_size = static_cast<size_t>(d.final_sizes[i]);
    if (d.y[i] == 1) instance.winner_index = instance.members.size();
    instance.members.push_back(std::move(member));
    out.rows[it->second].push_back(i);
  }
  for (size_t c = 0; c < out.instances.size(); ++c) {
    size_t winners = 0;
    for (size_t row : out.rows[c]) winners += d.y[row] == 1;
    if (winners != 1) {
      throw Error(ErrorCode::kBadParams,
                  "cluster " + out.instances[c].cluster_id +
                      " needs exactly one winner row");
    }
  }
  return out;
}

}  // namespace

ClusterEvaluation EvaluateClusterTable(const Model& model,
                                       const LabeledTable& table) {
  const ClusterRows grouped = GroupClusterRows(table);
  const DesignMatrix& d = table.design;
  const std::vector<double> all_scores = PredictProba(model, d.x, d.names);
  std::vector<std::vector<double>> scores;
  for (const std::vector<size_t>& rows : grouped.rows) {
    scores.emplace_back();
    for (size_t row : rows) scores.back().push_back(all_scores[row]);
  }
  return EvaluateClusterScores(grouped.instances, scores);
}

ClusterEvaluation CrossValidateClusters(const LabeledTable& table, int folds,
                                        double lambda, uint64_t seed) {
  const ClusterRows grouped = GroupClusterRows(table);
  const size_t n = grouped.instances.size();
  if (folds < 2 || n < static_cast<size_t>(folds)) {
    throw Error(ErrorCode::kTooFewExamples,
                std::to_string(n) + " clusters cannot fill " +
                    std::to_string(folds) + " folds");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<size_t>(order));
  std::vector<int> fold_of(n);
  for (size_t i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % folds);

  const DesignMatrix& d = table.design;
  std::vector<std::vector<double>> scores(n);
  TrainOptions train;
  train.lambda = lambda;
  train.seed = seed;
  for (int f = 0; f < folds; ++f) {
    std::vector<size_t> train_rows;
    for (size_t c = 0; c < n; ++c) {
      if (fold_of[c] == f) continue;
      train_rows.insert(train_rows.end(), grouped.rows[c].begin(),
                        grouped.rows[c].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::vector<int> y;
    for (size_t row : train_rows) y.push_back(d.y[row]);
    const Model model = Train(d.x.SelectRows(train_rows), y, d.names, train);
    for (size_t c = 0; c < n; ++c) {
      if (fold_of[c] != f) continue;
      scores[c] = PredictProba(model, d.x.SelectRows(grouped.rows[c]), d.names);
    }
  }
  return EvaluateClusterScores(grouped.instances, scores);
}

void WriteRankingCsv(std::ostream& out,
                     const std::vector<FeaturePredictor>& ranking) {
  WriteCsvRow(out, std::vector<std::string>{"rank", "feature", "accuracy",
                                            "pearson_log_size"});
  for (size_t i = 0; i < ranking.size(); ++i) {
    WriteCsvRow(out, std::vector<std::string>{
                         std::to_string(i + 1), ranking[i].feature,
                         FormatDouble(ranking[i].accuracy),
                         FormatDouble(ranking[i].pearson_log_size)});
  }
}

std::vector<fs::path> RunReport(const Dataset& dataset,
                                const ReportOptions& options,
                                const fs::path& out_dir) {
  TaskOptions task_options;
  task_options.graph = dataset.graph ? &*dataset.graph : nullptr;
  task_options.features = options.features;
  task_options.threads = options.threads;
  CrossValidationOptions cv;
  cv.folds = options.folds;
  cv.lambda = options.lambda;
  cv.seed = options.seed;
  cv.threads = options.threads;

  std::vector<fs::path> written;
  {
    const fs::path path = out_dir / "accuracy_vs_k.csv";
    std::ofstream out = OpenOutput(path);
    WriteCsvRow(out, std::vector<std::string>{
                         "k", "examples", "threshold", "accuracy_mean",
                         "accuracy_sd", "auc_mean", "auc_sd", "f1_mean",
                         "f1_sd", "baseline_accuracy"});
    for (size_t k : options.k_values) {
      Metrics m;
      LabeledTask task;
      try {
        task = LabelGrowth(dataset.cascades, k, task_options);
        const DesignMatrix design = ToDesignMatrix(task.examples);
        m = CrossValidate(design.x, design.y, cv);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kEmptyDataset ||
            e.code() == ErrorCode::kTooFewExamples ||
            e.code() == ErrorCode::kSingleClass) {
          continue;
        }
        throw;
      }
      WriteCsvRow(out, std::vector<std::string>{
                           FormatSize(k), FormatSize(task.examples.size()),
                           FormatDouble(task.threshold),
                           FormatDouble(m.accuracy_mean),
                           FormatDouble(m.accuracy_sd),
                           FormatDouble(m.auc_mean), FormatDouble(m.auc_sd),
                           FormatDouble(m.f1_mean), FormatDouble(m.f1_sd),
                           FormatDouble(m.baseline_accuracy)});
    }
    written.push_back(path);
  }
  {
    const LabeledTask task =
        LabelGrowth(dataset.cascades, options.ranking_k, task_options);
    const std::vector<FeaturePredictor> ranking = RankSingleFeaturePredictors(
        task.examples, options.folds, options.seed, options.lambda,
        options.threads);
    const fs::path path = out_dir / "feature_ranking.csv";
    std::ofstream out = OpenOutput(path);
    WriteRankingCsv(out, ranking);
    written.push_back(path);
  }
  for (const char* field :
       {"category", "cluster_id", "has_caption", "is_en", "root_type"}) {
    std::vector<GroupSummary> rows;
    try {
      rows = GroupSummaries(dataset.cascades, field);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnknownField) continue;
      throw;
    }
    const fs::path path = out_dir / (std::string("group_") + field + ".csv");
    std::ofstream out = OpenOutput(path);
    WriteCsvRow(out, std::vector<std::string>{"group", "count",
                                              "mean_final_size", "mean_wiener"});
    for (const GroupSummary& row : rows) {
      WriteCsvRow(out, std::vector<std::string>{
                           row.group, FormatSize(row.count),
                           FormatDouble(row.mean_final_size),
                           FormatDouble(row.mean_wiener)});
    }
    written.push_back(path);
  }
  return written;
}

namespace {

const std::set<std::string, std::less<>> kRunKeys = {
    "steps",  "seed",   "k",         "task",    "R",
    "m",      "quartiles", "lambda", "folds",   "centered_slopes",
    "report_k", "ranking_k", "events", "graph", "content",
    "directed"};

const std::vector<std::string> kStepOrder = {
    "generate", "featurize", "label", "train", "evaluate", "report"};

struct RunConfig {
  std::vector<std::string> steps;
  uint64_t seed = 1;
  size_t k = 5;
  LabelKind task = LabelKind::kGrowth;
  std::optional<size_t> r;
  size_t m = 10;
  bool quartiles = false;
  double lambda = 0.01;
  int folds = 10;
  FeatureOptions features;
  std::vector<size_t> report_k = {1, 2, 3, 4, 5, 10, 25};
  size_t ranking_k = 5;
  std::string events, graph, content;
  bool directed = false;
  SynthParams synth;
};

size_t ParseCount(const std::string& text) {
  const int64_t v = ParseInt(text);
  if (v < 0) throw Error(ErrorCode::kParse, "negative count '" + text + "'");
  return static_cast<size_t>(v);
}

RunConfig ParseRunConfig(const KeyValueDocument& doc,
                         std::optional<uint64_t> seed_override) {
  RunConfig cfg;
  KeyValueDocument synth;
  bool synth_seed = false;
  std::optional<std::string> steps;
  for (const auto& [key, value] : doc.entries()) {
    try {
      if (key.rfind("synth.", 0) == 0) {
        const std::string name = key.substr(6);
        synth_seed = synth_seed || name == "seed";
        synth.Add(name, value);
        continue;
      }
      if (!kRunKeys.contains(key)) {
        throw Error(ErrorCode::kConfigInvalid, "unknown key '" + key + "'");
      }
      if (key == "steps") steps = value;
      else if (key == "seed") cfg.seed = static_cast<uint64_t>(ParseInt(value));
      else if (key == "k") cfg.k = ParseCount(value);
      else if (key == "task") cfg.task = ParseLabelKind(value);
      else if (key == "R") cfg.r = ParseCount(value);
      else if (key == "m") cfg.m = ParseCount(value);
      else if (key == "quartiles") cfg.quartiles = ParseBool(value);
      else if (key == "lambda") cfg.lambda = ParseDouble(value);
      else if (key == "folds") cfg.folds = static_cast<int>(ParseInt(value));
      else if (key == "centered_slopes") {
        cfg.features.centered_slopes = ParseBool(value);
      } else if (key == "report_k") {
        cfg.report_k.clear();
        for (const std::string& part : Split(value, ',')) {
          cfg.report_k.push_back(ParseCount(std::string(Trim(part))));
        }
      } else if (key == "ranking_k") cfg.ranking_k = ParseCount(value);
      else if (key == "events") cfg.events = value;
      else if (key == "graph") cfg.graph = value;
      else if (key == "content") cfg.content = value;
      else if (key == "directed") cfg.directed = ParseBool(value);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfigInvalid) throw;
      throw Error(ErrorCode::kConfigInvalid, key + ": " + e.detail());
    }
  }
  if (seed_override) cfg.seed = *seed_override;
  if (!synth_seed) synth.Add("seed", std::to_string(cfg.seed));
  try {
    cfg.synth = ParseSynthParams(synth);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigInvalid) throw;
    throw Error(ErrorCode::kConfigInvalid, "synth: " + e.detail());
  }

  if (steps) {
    for (const std::string& part : Split(*steps, ',')) {
      const std::string step(Trim(part));
      if (std::find(kStepOrder.begin(), kStepOrder.end(), step) ==
          kStepOrder.end()) {
        throw Error(ErrorCode::kConfigInvalid, "unknown step '" + step + "'");
      }
      cfg.steps.push_back(step);
    }
  } else {
    for (const std::string& step : kStepOrder) {
      if (step == "report") continue;
      if (step == "generate" && !cfg.events.empty()) continue;
      cfg.steps.push_back(step);
    }
  }
  return cfg;
}

bool HasStep(const RunConfig& cfg, std::string_view step) {
  return std::find(cfg.steps.begin(), cfg.steps.end(), step) != cfg.steps.end();
}

}  // namespace

RunResult RunPipeline(const KeyValueDocument& config, const fs::path& base_dir,
                      const fs::path& out_dir, int threads,
                      std::optional<uint64_t> seed_override) {
  const RunConfig cfg = ParseRunConfig(config, seed_override);
  RunResult result;
  std::vector<std::pair<std::string, fs::path>> inputs;
  auto output = [&](const std::string& name) {
    result.outputs.push_back(name);
    return out_dir / name;
  };
  auto resolve = [&](const std::string& path) -> fs::path {
    if (path.empty()) return {};
    const fs::path p(path);
    return p.is_absolute() ? p : base_dir / p;
  };

  DatasetInputs data_inputs;
  data_inputs.directed = cfg.directed;
  if (HasStep(cfg, "generate")) {
    if (!cfg.events.empty()) {
      throw Error(ErrorCode::kConfigInvalid,
                  "'events' and the generate step are exclusive");
    }
    GenerateOutputs gen;
    gen.events = output("events.jsonl");
    gen.graph = output("graph.edges");
    gen.content = output("content.jsonl");
    RunGenerate(cfg.synth, threads, gen);
    data_inputs.events = gen.events;
    data_inputs.graph = gen.graph;
    data_inputs.content = gen.content;
    data_inputs.directed = false;
  } else {
    if (cfg.events.empty()) {
      throw Error(ErrorCode::kConfigInvalid,
                  "'events' is required without the generate step");
    }
    data_inputs.events = resolve(cfg.events);
    data_inputs.graph = resolve(cfg.graph);
    data_inputs.content = resolve(cfg.content);
    inputs.emplace_back("events", data_inputs.events);
    if (!cfg.graph.empty()) inputs.emplace_back("graph", data_inputs.graph);
    if (!cfg.content.empty()) {
      inputs.emplace_back("content", data_inputs.content);
    }
  }
  const Dataset dataset = LoadDataset(data_inputs, threads);

  if (HasStep(cfg, "featurize")) {
    RunFeaturize(dataset, cfg.k, cfg.features, threads,
                 output("features.csv"));
    result.outputs.push_back("features.csv.meta");
  }

  // Training always uses the growth or structure labels; the cluster task
  // adds a ranking table scored by that model.
  LabelOptions label;
  label.kind = cfg.task == LabelKind::kCluster ? LabelKind::kGrowth : cfg.task;
  label.k = cfg.k;
  label.r = cfg.r;
  label.m = cfg.m;
  label.quartiles = cfg.quartiles;
  label.seed = cfg.seed;
  label.features = cfg.features;
  label.threads = threads;
  const fs::path labeled = out_dir / "labeled.csv";
  const fs::path clustered = out_dir / "cluster.csv";
  if (HasStep(cfg, "label")) {
    RunLabel(dataset, label, output("labeled.csv"));
    result.outputs.push_back("labeled.csv.meta");
    if (cfg.task == LabelKind::kCluster) {
      LabelOptions cluster = label;
      cluster.kind = LabelKind::kCluster;
      RunLabel(dataset, cluster, output("cluster.csv"));
      result.outputs.push_back("cluster.csv.meta");
    }
  }

  if (HasStep(cfg, "train")) {
    const LabeledTable table = ReadLabeledTable(labeled);
    TrainOptions train;
    train.lambda = cfg.lambda;
    train.seed = cfg.seed;
    const Model model =
        Train(table.design.x, table.design.y, table.design.names, train);
    std::ofstream out = OpenOutput(output("model.txt"));
    SaveModel(model, out);
  }

  if (HasStep(cfg, "evaluate")) {
    const LabeledTable table = ReadLabeledTable(labeled);
    CrossValidationOptions cv;
    cv.folds = cfg.folds;
    cv.lambda = cfg.lambda;
    cv.seed = cfg.seed;
    cv.threads = threads;
    result.metrics = CrossValidate(table.design.x, table.design.y, cv);
    {
      std::ofstream out = OpenOutput(output("metrics.txt"));
      out << FormatMetricsTable(*result.metrics);
    }
    {
      std::ofstream out = OpenOutput(output("folds.csv"));
      WriteFoldCsv(out, *result.metrics);
    }
    if (cfg.task == LabelKind::kCluster) {
      const ClusterEvaluation eval = CrossValidateClusters(
          ReadLabeledTable(clustered), cfg.folds, cfg.lambda, cfg.seed);
      std::ofstream out = OpenOutput(output("cluster_eval.txt"));
      out << "instances\t" << eval.winner_ranks.size() << '\n';
      out << "top1_accuracy\t" << FormatDouble(eval.top1_accuracy) << '\n';
      out << "mrr\t" << FormatDouble(eval.mrr) << '\n';
    }
  }

  if (HasStep(cfg, "report")) {
    ReportOptions report;
    report.k_values = cfg.report_k;
    report.ranking_k = cfg.ranking_k;
    report.folds = cfg.folds;
    report.lambda = cfg.lambda;
    report.seed = cfg.seed;
    report.features = cfg.features;
    report.threads = threads;
    for (const fs::path& path : RunReport(dataset, report, out_dir / "report")) {
      result.outputs.push_back(fs::path("report") / path.filename());
    }
  }

  KeyValueDocument manifest;
  manifest.Add("version", kVersion);
  manifest.Add("seed", std::to_string(cfg.seed));
  std::string steps;
  for (const std::string& step : cfg.steps) {
    steps += (steps.empty() ? "" : ",") + step;
  }
  manifest.Add("steps", steps);
  for (const auto& [key, value] : config.entries()) {
    manifest.Add("config." + key, value);
  }
  const KeyValueDocument synth = SynthParamsDocument(cfg.synth);
  for (const auto& [key, value] : synth.entries()) {
    manifest.Add("synth." + key, value);
  }
  for (const auto& [name, path] : inputs) {
    manifest.Add("input." + name, FileDigest(path));
  }
  for (const fs::path& name : result.outputs) {
    manifest.Add("output." + name.generic_string(),
                 FileDigest(out_dir / name));
  }
  std::ofstream out = OpenOutput(out_dir / "manifest.txt");
  manifest.Write(out);
  result.outputs.push_back("manifest.txt");
  return result;
}

}  // namespace cascade
