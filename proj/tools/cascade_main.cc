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

// Command-line entry point: `cascade <subcommand> [flags]`.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cascade/cascade_model.h"
#include "cascade/error.h"
#include "cascade/io.h"
#include "cascade/learner.h"
#include "cascade/pipeline.h"
#include "cascade/stats.h"
#include "cascade/synth.h"
#include "cascade/tasks.h"
#include "cascade/text_io.h"
#include "cascade/virality.h"

namespace fs = std::filesystem;

namespace {

using cascade::Error;
using cascade::ErrorCode;

struct Globals {
  std::optional<uint64_t> seed;
  int threads = 1;
  std::string out_dir;

  fs::path Output(const std::string& path) const {
    if (path.empty() || out_dir.empty() || fs::path(path).is_absolute()) {
      return path;
    }
    return fs::path(out_dir) / path;
  }
  uint64_t Seed(const std::optional<uint64_t>& local) const {
    if (local) return *local;
    return seed.value_or(1);
  }
};

struct DataFlags {
  std::string in, graph, content;
  bool directed = false;

  void Register(CLI::App* app) {
    app->add_option("--in", in, "Reshare events (.jsonl or .csv)")
        ->required();
    app->add_option("--graph", graph, "Social-graph edge list");
    app->add_flag("--directed", directed, "Treat the edge list as directed");
    app->add_option("--content", content, "Content records (.jsonl)");
  }
  cascade::DatasetInputs Inputs() const {
    return {in, graph, content, directed};
  }
};

std::vector<double> ReadSamples(const fs::path& path) {
  std::ifstream in = cascade::OpenInput(path);
  std::vector<double> values;
  std::string line;
  int64_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = cascade::Trim(line);
    if (text.empty() || text.front() == '#') continue;
    try {
      values.push_back(cascade::ParseDouble(text));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" +
                                         std::to_string(number) + ": " +
                                         e.detail());
    }
  }
  return values;
}

void WriteOrPrint(const std::string& path, const Globals& g,
                  const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(std::cout);
  } else {
    std::ofstream out = cascade::OpenOutput(g.Output(path));
    write(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascade growth prediction toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--threads", g.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir,
                 "Directory prefixed to relative output paths");

  std::function<void()> action;

  // generate
  auto* generate = app.add_subcommand("generate", "Synthesize a dataset");
  std::string params_path, out_events, out_graph, out_content;
  generate->add_option("--params", params_path,
                       "Flat key=value synthesis config (defaults if omitted)");
  generate->add_option("--out-events", out_events, "Events JSONL")->required();
  generate->add_option("--out-graph", out_graph, "Edge list")->required();
  generate->add_option("--out-content", out_content, "Content records JSONL");
  generate->callback([&] {
    action = [&] {
      cascade::SynthParams params;
      if (!params_path.empty()) {
        params = cascade::ParseSynthParams(
            cascade::KeyValueDocument::Load(params_path));
      }
      if (g.seed) params.seed = *g.seed;
      cascade::RunGenerate(params, g.threads,
                           {g.Output(out_events), g.Output(out_graph),
                            g.Output(out_content)});
    };
  });

  // featurize
  auto* featurize =
      app.add_subcommand("featurize", "Extract features at k reshares");
  DataFlags feat_data;
  size_t feat_k = 0;
  std::string feat_out;
  bool feat_centered = false;
  featurize->add_option("--k", feat_k, "Observed reshares")->required();
  feat_data.Register(featurize);
  featurize->add_option("--out", feat_out, "Feature CSV")->required();
  featurize->add_flag("--centered-slopes", feat_centered,
                      "Fit slopes with an intercept");
  featurize->callback([&] {
    action = [&] {
      const cascade::Dataset data =
          cascade::LoadDataset(feat_data.Inputs(), g.threads);
      cascade::RunFeaturize(data, feat_k, {feat_centered}, g.threads,
                            g.Output(feat_out));
    };
  });

  // label
  auto* label = app.add_subcommand("label", "Build a labeled task dataset");
  std::string label_task;
  DataFlags label_data;
  cascade::LabelOptions label_opts;
  std::optional<size_t> label_r;
  std::optional<uint64_t> label_seed;
  std::string label_out;
  label->add_option("task", label_task, "growth, structure or cluster")
      ->required()
      ->check(CLI::IsMember({"growth", "structure", "cluster"}));
  label->add_option("--k", label_opts.k, "Observed reshares")->required();
  label->add_option("--R", label_r, "Fixed population threshold (growth)");
  label->add_option("--m", label_opts.m, "Members per cluster instance")
      ->capture_default_str();
  label->add_flag("--quartiles", label_opts.quartiles,
                  "Keep only the bottom and top quarter");
  label->add_option("--seed", label_seed, "Sampling seed");
  label_data.Register(label);
  label->add_flag("--centered-slopes", label_opts.features.centered_slopes,
                  "Fit slopes with an intercept");
  label->add_option("--out", label_out, "Labeled CSV")->required();
  label->callback([&] {
    action = [&] {
      label_opts.kind = cascade::ParseLabelKind(label_task);
      label_opts.r = label_r;
      label_opts.seed = g.Seed(label_seed);
      label_opts.threads = g.threads;
      const cascade::Dataset data =
          cascade::LoadDataset(label_data.Inputs(), g.threads);
      cascade::RunLabel(data, label_opts, g.Output(label_out));
    };
  });

  // train
  auto* train = app.add_subcommand(
      "train", "Cross-validate and fit a logistic regression model");
  std::string train_in, train_model, train_folds_out;
  double train_lambda = 0.01;
  int train_folds = 10;
  std::optional<uint64_t> train_seed;
  train->add_option("--in", train_in, "Labeled CSV")->required();
  train->add_option("--lambda", train_lambda, "L2 penalty")
      ->capture_default_str();
  train->add_option("--folds", train_folds, "Cross-validation folds")
      ->capture_default_str();
  train->add_option("--seed", train_seed, "Fold assignment seed");
  train->add_option("--model-out", train_model, "Model file")->required();
  train->add_option("--folds-out", train_folds_out, "Per-fold metrics CSV");
  train->callback([&] {
    action = [&] {
      const cascade::LabeledTable table = cascade::ReadLabeledTable(train_in);
      const uint64_t seed = g.Seed(train_seed);
      cascade::CrossValidationOptions cv;
      cv.folds = train_folds;
      cv.lambda = train_lambda;
      cv.seed = seed;
      cv.threads = g.threads;
      const cascade::Metrics metrics =
          cascade::CrossValidate(table.design.x, table.design.y, cv);
      std::cout << cascade::FormatMetricsTable(metrics);
      if (!train_folds_out.empty()) {
        std::ofstream out = cascade::OpenOutput(g.Output(train_folds_out));
        cascade::WriteFoldCsv(out, metrics);
      }
      cascade::TrainOptions options;
      options.lambda = train_lambda;
      options.seed = seed;
      const cascade::Model model = cascade::Train(
          table.design.x, table.design.y, table.design.names, options);
      std::ofstream out = cascade::OpenOutput(g.Output(train_model));
      cascade::SaveModel(model, out);
    };
  });

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Metrics for a model, or cross-validated metrics");
  std::string eval_in, eval_model, eval_folds_out;
  double eval_lambda = 0.01;
  int eval_folds = 10;
  std::optional<uint64_t> eval_seed;
  evaluate->add_option("--in", eval_in, "Labeled CSV")->required();
  evaluate->add_option("--model", eval_model,
                       "Model file; cross-validates when omitted");
  evaluate->add_option("--lambda", eval_lambda, "L2 penalty")
      ->capture_default_str();
  evaluate->add_option("--folds", eval_folds, "Cross-validation folds")
      ->capture_default_str();
  evaluate->add_option("--seed", eval_seed, "Fold assignment seed");
  evaluate->add_option("--folds-out", eval_folds_out, "Per-fold metrics CSV");
  evaluate->callback([&] {
    action = [&] {
      const cascade::LabeledTable table = cascade::ReadLabeledTable(eval_in);
      cascade::Metrics metrics;
      if (!eval_model.empty()) {
        std::ifstream in = cascade::OpenInput(eval_model);
        const cascade::Model model = cascade::LoadModel(in);
        if (!table.cluster_ids.empty()) {
          const cascade::ClusterEvaluation eval =
              cascade::EvaluateClusterTable(model, table);
          std::cout << "instances\t" << eval.winner_ranks.size() << '\n'
                    << "top1_accuracy\t"
                    << cascade::FormatDouble(eval.top1_accuracy) << '\n'
                    << "mrr\t" << cascade::FormatDouble(eval.mrr) << '\n';
          return;
        }
        metrics = cascade::EvaluateModel(model, table);
      } else if (!table.cluster_ids.empty()) {
        const cascade::ClusterEvaluation eval = cascade::CrossValidateClusters(
            table, eval_folds, eval_lambda, g.Seed(eval_seed));
        std::cout << "instances\t" << eval.winner_ranks.size() << '\n'
                  << "top1_accuracy\t"
                  << cascade::FormatDouble(eval.top1_accuracy) << '\n'
                  << "mrr\t" << cascade::FormatDouble(eval.mrr) << '\n';
        return;
      } else {
        cascade::CrossValidationOptions cv;
        cv.folds = eval_folds;
        cv.lambda = eval_lambda;
        cv.seed = g.Seed(eval_seed);
        cv.threads = g.threads;
        metrics = cascade::CrossValidate(table.design.x, table.design.y, cv);
      }
      std::cout << cascade::FormatMetricsTable(metrics);
      if (!eval_folds_out.empty()) {
        std::ofstream out = cascade::OpenOutput(g.Output(eval_folds_out));
        cascade::WriteFoldCsv(out, metrics);
      }
    };
  });

  // rank-features
  auto* rank = app.add_subcommand(
      "rank-features", "Cross-validated accuracy of each feature alone");
  std::string rank_in, rank_out;
  double rank_lambda = 0.01;
  int rank_folds = 10;
  std::optional<uint64_t> rank_seed;
  rank->add_option("--in", rank_in, "Labeled CSV")->required();
  rank->add_option("--lambda", rank_lambda, "L2 penalty")
      ->capture_default_str();
  rank->add_option("--folds", rank_folds, "Cross-validation folds")
      ->capture_default_str();
  rank->add_option("--seed", rank_seed, "Fold assignment seed");
  rank->add_option("--out", rank_out, "Ranking CSV (stdout if omitted)");
  rank->callback([&] {
    action = [&] {
      const cascade::LabeledTable table = cascade::ReadLabeledTable(rank_in);
      const auto ranking = cascade::RankSingleFeaturePredictors(
          table.design, rank_folds, g.Seed(rank_seed), rank_lambda,
          g.threads);
      WriteOrPrint(rank_out, g, [&](std::ostream& out) {
        cascade::WriteRankingCsv(out, ranking);
      });
    };
  });

  // wiener
  auto* wiener = app.add_subcommand(
      "wiener", "Structural virality of every cascade in an event file");
  std::string wiener_in;
  wiener->add_option("--in", wiener_in, "Reshare events (.jsonl or .csv)")
      ->required();
  wiener->callback([&] {
    action = [&] {
      const auto trees = cascade::BuildCascades(
          cascade::ReadEvents(wiener_in), g.threads);
      for (const cascade::CascadeTree& tree : trees) {
        if (tree.node_count() < 2) {
          std::cerr << "cascade wiener: skipping " << tree.id()
                    << ": fewer than two nodes\n";
          continue;
        }
        std::cout << tree.id() << '\t'
                  << cascade::FormatDouble(cascade::WienerIndex(tree)) << '\n';
      }
    };
  });

  // stats
  auto* stats = app.add_subcommand("stats", "Distribution statistics");
  stats->require_subcommand(1);
  auto* fit_alpha = stats->add_subcommand(
      "fit-alpha", "Maximum-likelihood power-law exponent");
  std::string alpha_in;
  double alpha_xmin = 1.0;
  fit_alpha->add_option("--xmin", alpha_xmin, "Lower cutoff")->required();
  fit_alpha->add_option("--in", alpha_in, "Newline-separated samples")
      ->required();
  fit_alpha->callback([&] {
    action = [&] {
      std::cout << cascade::FormatDouble(cascade::FitPowerLawAlpha(
                       ReadSamples(alpha_in), alpha_xmin))
                << '\n';
    };
  });
  auto* gini = stats->add_subcommand("gini", "Gini coefficient");
  std::string gini_in;
  gini->add_option("--in", gini_in, "Newline-separated values")->required();
  gini->callback([&] {
    action = [&] {
      std::cout << cascade::FormatDouble(cascade::Gini(ReadSamples(gini_in)))
                << '\n';
    };
  });
  auto* median = stats->add_subcommand("median", "Power-law median");
  cascade::PowerLawSpec median_spec{2.0, 1.0};
  median->add_option("--alpha", median_spec.alpha, "Exponent")->required();
  median->add_option("--xmin", median_spec.x_min, "Lower cutoff")->required();
  median->callback([&] {
    action = [&] {
      std::cout << cascade::FormatDouble(cascade::PowerLawMedian(median_spec))
                << '\n';
    };
  });

  // report
  auto* report = app.add_subcommand(
      "report", "CSV data for accuracy-vs-k, feature ranking and groups");
  DataFlags report_data;
  cascade::ReportOptions report_opts;
  std::vector<size_t> report_k;
  std::optional<uint64_t> report_seed;
  report_data.Register(report);
  report->add_option("--k-values", report_k, "Observation windows")
      ->delimiter(',');
  report->add_option("--ranking-k", report_opts.ranking_k,
                     "Window for the single-feature ranking")
      ->capture_default_str();
  report->add_option("--folds", report_opts.folds, "Cross-validation folds")
      ->capture_default_str();
  report->add_option("--lambda", report_opts.lambda, "L2 penalty")
      ->capture_default_str();
  report->add_option("--seed", report_seed, "Fold assignment seed");
  report->add_flag("--centered-slopes", report_opts.features.centered_slopes,
                   "Fit slopes with an intercept");
  report->callback([&] {
    action = [&] {
      if (!report_k.empty()) report_opts.k_values = report_k;
      report_opts.seed = g.Seed(report_seed);
      report_opts.threads = g.threads;
      const cascade::Dataset data =
          cascade::LoadDataset(report_data.Inputs(), g.threads);
      const fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
      for (const fs::path& path : cascade::RunReport(data, report_opts, dir)) {
        std::cout << path.generic_string() << '\n';
      }
    };
  });

  // run
  auto* run = app.add_subcommand(
      "run", "Execute a config-driven pipeline and write a manifest");
  std::string run_config;
  run->add_option("--config", run_config, "Flat key=value run config")
      ->required();
  run->callback([&] {
    action = [&] {
      const cascade::KeyValueDocument config =
          cascade::KeyValueDocument::Load(run_config);
      const fs::path dir = g.out_dir.empty() ? fs::path(".") : fs::path(g.out_dir);
      const cascade::RunResult result = cascade::RunPipeline(
          config, fs::path(run_config).parent_path(), dir, g.threads, g.seed);
      if (result.metrics) {
        std::cout << cascade::FormatMetricsTable(*result.metrics);
      }
    };
  });

  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (const CLI::App* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (const CLI::App* nested : sub->get_subcommands()) {
      command += " " + nested->get_name();
    }
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    std::cerr << "cascade " << command << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cascade " << command << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}
