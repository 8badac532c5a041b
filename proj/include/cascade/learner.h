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

// Regularized logistic regression with internal standardization, stratified
// k-fold cross-validation and the classification and ranking metrics used to
// report it.

#ifndef CASCADE_LEARNER_H_
#define CASCADE_LEARNER_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cascade/features.h"
#include "cascade/matrix.h"
#include "cascade/tasks.h"

namespace cascade {

struct TrainOptions {
  double lambda = 0.01;
  uint64_t seed = 0;
  int max_iterations = 10000;
  double gradient_tolerance = 1e-6;
};

struct Model {
  // Features the model uses, in weight order. Zero-variance training
  // columns are left out and listed in `dropped`.
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // on standardized features
  double bias = 0.0;
  std::vector<double> means;
  std::vector<double> stdevs;
  std::vector<std::string> dropped;

  double lambda = 0.0;
  uint64_t seed = 0;
  int iterations = 0;
  double final_loss = 0.0;     // regularized objective at the solution
  double gradient_norm = 0.0;  // max-norm of the gradient at the solution
  bool converged = false;

  bool operator==(const Model&) const = default;
};

// Mean logistic loss + (lambda / 2) * |w|^2 on already standardized inputs.
// The bias is not penalized. `gradient` receives d weight entries followed by
// the bias entry.
double LogisticObjective(const Matrix& x, std::span<const int> y,
                         std::span<const double> weights, double bias,
                         double lambda, std::vector<double>* gradient);

// Fits on standardized features by damped Newton steps with Armijo
// backtracking. Stops when the gradient max-norm drops below the tolerance
// or after max_iterations. Throws kSingleClass, kNonFiniteInput,
// kLengthMismatch.
Model Train(const Matrix& x, std::span<const int> y,
            std::span<const std::string> names, const TrainOptions& options);

// `values` holds raw feature values aligned with model.feature_names.
double PredictProba(const Model& model, std::span<const double> values);
// Looks features up by encoded name; throws kMissingFeature.
double PredictProba(const Model& model, const FeatureVector& features);
// Maps model features onto the named columns of `x`; throws kMissingFeature.
std::vector<double> PredictProba(const Model& model, const Matrix& x,
                                 std::span<const std::string> column_names);

// Data loss (mean logistic loss without the penalty) of a model on raw data.
double DataLoss(const Model& model, const Matrix& x,
                std::span<const std::string> column_names,
                std::span<const int> y);

void SaveModel(const Model& model, std::ostream& out);
Model LoadModel(std::istream& in);

// Rank-based (Mann-Whitney) AUC, ties count one half. Throws kSingleClass.
double Auc(std::span<const double> scores, std::span<const int> labels);
// F1 of the positive class; 0 when precision + recall is 0. Throws kEmpty.
double F1(std::span<const int> predictions, std::span<const int> labels);
double Accuracy(std::span<const int> predictions, std::span<const int> labels);
// Mean reciprocal rank over 1-based ranks. Throws kEmpty.
double Mrr(std::span<const int> ranks);

struct FoldMetrics {
  size_t train_size = 0;
  size_t test_size = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double auc = 0.0;  // NaN when the test fold holds a single class
};

struct Metrics {
  std::vector<FoldMetrics> folds;
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;
  double f1_mean = 0.0;
  double f1_sd = 0.0;
  double auc_mean = 0.0;
  double auc_sd = 0.0;
  // Accuracy of always predicting the majority class of the full dataset.
  double baseline_accuracy = 0.0;
};

struct CrossValidationOptions {
  int folds = 10;
  double lambda = 0.01;
  uint64_t seed = 0;
  int threads = 1;
};

// Stratified fold ids in [0, folds). Each class is shuffled with the seed
// and dealt round-robin, continuing the count across classes.
std::vector<int> StratifiedFolds(std::span<const int> y, int folds,
                                 uint64_t seed);

// Throws kTooFewExamples when folds < 2 or there are fewer rows than folds,
// kSingleClass when a class is absent.
Metrics CrossValidate(const Matrix& x, std::span<const int> y,
                      const CrossValidationOptions& options);

struct ClusterEvaluation {
  double top1_accuracy = 0.0;
  double mrr = 0.0;
  std::vector<int> winner_ranks;  // 1-based, per instance
};

// Scores every member with the model and ranks descending, ties broken by
// cascade id. Throws kEmpty.
ClusterEvaluation EvaluateCluster(const Model& model,
                                  std::span<const ClusterInstance> instances);

// Same, from precomputed member scores.
ClusterEvaluation EvaluateClusterScores(
    std::span<const ClusterInstance> instances,
    std::span<const std::vector<double>> scores);

}  // namespace cascade

#endif  // CASCADE_LEARNER_H_
