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

#include "cascade/learner.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cascade/error.h"
#include "cascade/parallel.h"
#include "cascade/random.h"
#include "cascade/text_io.h"

namespace cascade {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// In-place Cholesky solve of a symmetric positive definite system. Returns
// false if the matrix is not numerically positive definite.
bool CholeskySolve(std::vector<double> a, size_t n, std::vector<double>* b) {
  for (size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) return false;
    const double l = std::sqrt(diag);
    a[j * n + j] = l;
    for (size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / l;
    }
  }
  auto& x = *b;
  for (size_t i = 0; i < n; ++i) {
    double v = x[i];
    for (size_t k = 0; k < i; ++k) v -= a[i * n + k] * x[k];
    x[i] = v / a[i * n + i];
  }
  for (size_t i = n; i-- > 0;) {
    double v = x[i];
    for (size_t k = i + 1; k < n; ++k) v -= a[k * n + i] * x[k];
    x[i] = v / a[i * n + i];
  }
  return true;
}

// Hessian of the objective over (weights..., bias).
std::vector<double> LogisticHessian(const Matrix& x,
                                    std::span<const double> weights,
                                    double bias, double lambda) {
  const size_t n = x.rows();
  const size_t d = x.cols();
  const size_t p = d + 1;
  std::vector<double> h(p * p, 0.0);
  std::vector<double> row(p);
  for (size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    double z = bias;
    for (size_t j = 0; j < d; ++j) z += weights[j] * xi[j];
    const double s = Sigmoid(z);
    const double w = s * (1.0 - s);
    if (w == 0.0) continue;
    std::copy(xi.begin(), xi.end(), row.begin());
    row[d] = 1.0;
    for (size_t a = 0; a < p; ++a) {
      const double wa = w * row[a];
      double* out = &h[a * p];
      for (size_t b = 0; b <= a; ++b) out[b] += wa * row[b];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (size_t a = 0; a < p; ++a) {
    for (size_t b = 0; b <= a; ++b) {
      h[a * p + b] *= inv_n;
      h[b * p + a] = h[a * p + b];
    }
  }
  for (size_t j = 0; j < d; ++j) h[j * p + j] += lambda;
  return h;
}

void ValidateTrainingData(const Matrix& x, std::span<const int> y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.rows()) + " rows vs " +
                    std::to_string(y.size()) + " labels");
  }
  size_t positives = 0;
  for (int label : y) {
    if (label != 0 && label != 1) {
      throw Error(ErrorCode::kNonFiniteInput, "labels must be 0 or 1");
    }
    positives += static_cast<size_t>(label);
  }
  if (y.size() < 2 || positives == 0 || positives == y.size()) {
    throw Error(ErrorCode::kSingleClass,
                "training data must contain both classes");
  }
  for (size_t r = 0; r < x.rows(); ++r) {
    for (double v : x.row(r)) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteInput,
                    "non-finite value in row " + std::to_string(r));
      }
    }
  }
}

double SampleSd(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double MeanOf(const std::vector<double>& values) {
  if (values.empty()) return std::nan("");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

double LogisticObjective(const Matrix& x, std::span<const int> y,
                         std::span<const double> weights, double bias,
                         double lambda, std::vector<double>* gradient) {
  const size_t n = x.rows();
  const size_t d = x.cols();
  if (gradient != nullptr) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    double z = bias;
    for (size_t j = 0; j < d; ++j) z += weights[j] * xi[j];
    loss += Softplus(z) - (y[i] == 1 ? z : 0.0);
    if (gradient != nullptr) {
      const double residual = Sigmoid(z) - static_cast<double>(y[i]);
      for (size_t j = 0; j < d; ++j) (*gradient)[j] += residual * xi[j];
      (*gradient)[d] += residual;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  loss *= inv_n;
  double penalty = 0.0;
  for (size_t j = 0; j < d; ++j) penalty += weights[j] * weights[j];
  loss += 0.5 * lambda * penalty;
  if (gradient != nullptr) {
    for (size_t j = 0; j <= d; ++j) (*gradient)[j] *= inv_n;
    for (size_t j = 0; j < d; ++j) (*gradient)[j] += lambda * weights[j];
  }
  return loss;
}

Model Train(const Matrix& x, std::span<const int> y,
            std::span<const std::string> names, const TrainOptions& options) {
  if (names.size() != x.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "feature names do not match columns");
  }
  if (!(options.lambda >= 0.0)) {
    throw Error(ErrorCode::kBadParams, "lambda must be nonnegative");
  }
  ValidateTrainingData(x, y);

  Model model;
  model.lambda = options.lambda;
  model.seed = options.seed;
  const size_t n = x.rows();
  std::vector<size_t> kept;
  for (size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (size_t r = 0; r < n; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
      kept.push_back(c);
      model.feature_names.push_back(names[c]);
      model.means.push_back(mean);
      model.stdevs.push_back(sd);
    } else {
      model.dropped.push_back(names[c]);
    }
  }

  const size_t d = kept.size();
  Matrix z(n, d);
  for (size_t r = 0; r < n; ++r) {
    for (size_t j = 0; j < d; ++j) {
      z(r, j) = (x(r, kept[j]) - model.means[j]) / model.stdevs[j];
    }
  }

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> gradient;
  std::vector<double> trial_w(d);
  double loss = LogisticObjective(z, y, w, b, options.lambda, &gradient);
  int iterations = 0;
  while (iterations < options.max_iterations) {
    double gmax = 0.0;
    for (double g : gradient) gmax = std::max(gmax, std::abs(g));
    if (gmax < options.gradient_tolerance) break;

    std::vector<double> h = LogisticHessian(z, w, b, options.lambda);
    for (size_t j = 0; j <= d; ++j) h[j * (d + 1) + j] += 1e-12;
    std::vector<double> step(gradient.size());
    for (size_t j = 0; j <= d; ++j) step[j] = -gradient[j];
    if (!CholeskySolve(std::move(h), d + 1, &step)) {
      for (size_t j = 0; j <= d; ++j) step[j] = -gradient[j];
    }
    double slope = 0.0;
    for (size_t j = 0; j <= d; ++j) slope += gradient[j] * step[j];
    if (!(slope < 0.0)) {
      slope = 0.0;
      for (size_t j = 0; j <= d; ++j) {
        step[j] = -gradient[j];
        slope -= gradient[j] * gradient[j];
      }
    }

    // Armijo backtracking.
    double t = 1.0;
    bool accepted = false;
    double trial_b = b;
    double trial_loss = loss;
    for (int halvings = 0; halvings < 60; ++halvings, t *= 0.5) {
      for (size_t j = 0; j < d; ++j) trial_w[j] = w[j] + t * step[j];
      trial_b = b + t * step[d];
      trial_loss = LogisticObjective(z, y, trial_w, trial_b, options.lambda,
                                     nullptr);
      if (trial_loss <= loss + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    ++iterations;
    if (!accepted) break;
    w = trial_w;
    b = trial_b;
    loss = LogisticObjective(z, y, w, b, options.lambda, &gradient);
  }

  double gmax = 0.0;
  for (double g : gradient) gmax = std::max(gmax, std::abs(g));
  model.weights = std::move(w);
  model.bias = b;
  model.iterations = iterations;
  model.final_loss = loss;
  model.gradient_norm = gmax;
  model.converged = gmax < options.gradient_tolerance;
  return model;
}

double PredictProba(const Model& model, std::span<const double> values) {
  if (values.size() != model.weights.size()) {
    throw Error(ErrorCode::kMissingFeature,
                "expected " + std::to_string(model.weights.size()) +
                    " feature values, got " + std::to_string(values.size()));
  }
  double z = model.bias;
  for (size_t j = 0; j < values.size(); ++j) {
    z += model.weights[j] * (values[j] - model.means[j]) / model.stdevs[j];
  }
  return Sigmoid(z);
}

double PredictProba(const Model& model, const FeatureVector& features) {
  const std::vector<std::string> names = features.EncodedNames();
  const std::vector<double> values = features.EncodedValues();
  std::map<std::string_view, double> lookup;
  for (size_t i = 0; i < names.size(); ++i) lookup.emplace(names[i], values[i]);
  std::vector<double> row;
  row.reserve(model.feature_names.size());
  for (const std::string& name : model.feature_names) {
    auto it = lookup.find(name);
    if (it == lookup.end()) {
      throw Error(ErrorCode::kMissingFeature,
                  "input lacks model feature '" + name + "'");
    }
    row.push_back(it->second);
  }
  return PredictProba(model, row);
}

std::vector<double> PredictProba(const Model& model, const Matrix& x,
                                 std::span<const std::string> column_names) {
  std::map<std::string_view, size_t> lookup;
  for (size_t c = 0; c < column_names.size(); ++c) {
    lookup.emplace(column_names[c], c);
  }
  std::vector<size_t> columns;
  for (const std::string& name : model.feature_names) {
    auto it = lookup.find(name);
    if (it == lookup.end()) {
      throw Error(ErrorCode::kMissingFeature,
                  "input lacks model feature '" + name + "'");
    }
    columns.push_back(it->second);
  }
  std::vector<double> scores(x.rows());
  std::vector<double> row(columns.size());
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t j = 0; j < columns.size(); ++j) row[j] = x(r, columns[j]);
    scores[r] = PredictProba(model, row);
  }
  return scores;
}

double DataLoss(const Model& model, const Matrix& x,
                std::span<const std::string> column_names,
                std::span<const int> y) {
  const std::vector<double> p = PredictProba(model, x, column_names);
  double loss = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double z = std::log(p[i]) - std::log1p(-p[i]);
    loss += Softplus(z) - (y[i] == 1 ? z : 0.0);
  }
  return loss / static_cast<double>(p.size());
}

void SaveModel(const Model& model, std::ostream& out) {
  KeyValueDocument doc;
  doc.Add("format", "cascade-logistic-regression");
  doc.Add("version", "1");
  doc.Add("lambda", FormatDouble(model.lambda));
  doc.Add("seed", std::to_string(model.seed));
  doc.Add("iterations", std::to_string(model.iterations));
  doc.Add("final_loss", FormatDouble(model.final_loss));
  doc.Add("gradient_norm", FormatDouble(model.gradient_norm));
  doc.Add("converged", model.converged ? "1" : "0");
  doc.Add("bias", FormatDouble(model.bias));
  out << "# feature = mean stdev weight name\n";
  for (size_t j = 0; j < model.feature_names.size(); ++j) {
    doc.Add("feature", FormatDouble(model.means[j]) + " " +
                           FormatDouble(model.stdevs[j]) + " " +
                           FormatDouble(model.weights[j]) + " " +
                           model.feature_names[j]);
  }
  for (const std::string& name : model.dropped) doc.Add("dropped", name);
  doc.Write(out);
}

Model LoadModel(std::istream& in) {
  const KeyValueDocument doc = KeyValueDocument::Parse(in, "model");
  if (doc.GetOr("format", "") != "cascade-logistic-regression") {
    throw Error(ErrorCode::kParse, "not a cascade model file");
  }
  auto require = [&](std::string_view key) {
    auto value = doc.Get(key);
    if (!value) {
      throw Error(ErrorCode::kParse,
                  "model file lacks '" + std::string(key) + "'");
    }
    return *value;
  };
  Model model;
  model.lambda = ParseDouble(require("lambda"));
  model.seed = static_cast<uint64_t>(std::stoull(require("seed")));
  model.iterations = static_cast<int>(ParseInt(require("iterations")));
  model.final_loss = ParseDouble(require("final_loss"));
  model.gradient_norm = ParseDouble(require("gradient_norm"));
  model.converged = ParseBool(require("converged"));
  model.bias = ParseDouble(require("bias"));
  for (const std::string& line : doc.GetAll("feature")) {
    std::istringstream fields(line);
    std::string mean, sd, weight, name;
    if (!(fields >> mean >> sd >> weight >> name)) {
      throw Error(ErrorCode::kParse, "bad feature line '" + line + "'");
    }
    model.means.push_back(ParseDouble(mean));
    model.stdevs.push_back(ParseDouble(sd));
    model.weights.push_back(ParseDouble(weight));
    model.feature_names.push_back(name);
  }
  model.dropped = doc.GetAll("dropped");
  return model;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "scores and labels differ in length");
  }
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  size_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        positive_rank_sum += average_rank;
        ++positives;
      }
    }
    i = j;
  }
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "AUC needs both classes");
  }
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) /
         (p * static_cast<double>(negatives));
}

double F1(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty()) throw Error(ErrorCode::kEmpty, "F1 of no predictions");
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and labels differ");
  }
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == 1 && labels[i] == 1) tp += 1.0;
    if (predictions[i] == 1 && labels[i] == 0) fp += 1.0;
    if (predictions[i] == 0 && labels[i] == 1) fn += 1.0;
  }
  const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double Accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty()) throw Error(ErrorCode::kEmpty, "accuracy of nothing");
  size_t correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    correct += predictions[i] == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double Mrr(std::span<const int> ranks) {
  if (ranks.empty()) throw Error(ErrorCode::kEmpty, "MRR of no ranks");
  double sum = 0.0;
  for (int rank : ranks) {
    if (rank < 1) throw Error(ErrorCode::kBadParams, "ranks start at 1");
    sum += 1.0 / static_cast<double>(rank);
  }
  return sum / static_cast<double>(ranks.size());
}

std::vector<int> StratifiedFolds(std::span<const int> y, int folds,
                                 uint64_t seed) {
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < y.size(); ++i) by_class[y[i] == 1].push_back(i);
  std::vector<int> assignment(y.size(), 0);
  size_t dealt = 0;
  for (int cls : {1, 0}) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(cls)));
    rng.Shuffle(std::span<size_t>(by_class[cls]));
    for (size_t index : by_class[cls]) {
      assignment[index] = static_cast<int>(dealt++ % static_cast<size_t>(folds));
    }
  }
  return assignment;
}

Metrics CrossValidate(const Matrix& x, std::span<const int> y,
                      const CrossValidationOptions& options) {
  if (options.folds < 2 || x.rows() < static_cast<size_t>(options.folds)) {
    throw Error(ErrorCode::kTooFewExamples,
                std::to_string(x.rows()) + " examples cannot fill " +
                    std::to_string(options.folds) + " folds");
  }
  ValidateTrainingData(x, y);
  std::vector<std::string> names(x.cols());
  for (size_t c = 0; c < names.size(); ++c) names[c] = "x" + std::to_string(c);

  const std::vector<int> fold_of = StratifiedFolds(y, options.folds, options.seed);
  Metrics metrics;
  metrics.folds.resize(static_cast<size_t>(options.folds));
  ParallelFor(metrics.folds.size(), options.threads, [&](size_t f) {
    std::vector<size_t> train_rows, test_rows;
    for (size_t i = 0; i < y.size(); ++i) {
      (static_cast<size_t>(fold_of[i]) == f ? test_rows : train_rows).push_back(i);
    }
    std::vector<int> train_y, test_y;
    for (size_t i : train_rows) train_y.push_back(y[i]);
    for (size_t i : test_rows) test_y.push_back(y[i]);

    FoldMetrics& fold = metrics.folds[f];
    fold.train_size = train_rows.size();
    fold.test_size = test_rows.size();
    TrainOptions train_options;
    train_options.lambda = options.lambda;
    train_options.seed = options.seed;
    const Model model =
        Train(x.SelectRows(train_rows), train_y, names, train_options);
    const std::vector<double> scores =
        PredictProba(model, x.SelectRows(test_rows), names);
    std::vector<int> predicted(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) predicted[i] = scores[i] >= 0.5;
    fold.accuracy = Accuracy(predicted, test_y);
    fold.f1 = F1(predicted, test_y);
    try {
      fold.auc = Auc(scores, test_y);
    } catch (const Error&) {
      fold.auc = std::nan("");
    }
  });

  std::vector<double> accuracy, f1, auc;
  for (const FoldMetrics& fold : metrics.folds) {
    accuracy.push_back(fold.accuracy);
    f1.push_back(fold.f1);
    if (!std::isnan(fold.auc)) auc.push_back(fold.auc);
  }
  metrics.accuracy_mean = MeanOf(accuracy);
  metrics.accuracy_sd = SampleSd(accuracy, metrics.accuracy_mean);
  metrics.f1_mean = MeanOf(f1);
  metrics.f1_sd = SampleSd(f1, metrics.f1_mean);
  metrics.auc_mean = MeanOf(auc);
  metrics.auc_sd = SampleSd(auc, metrics.auc_mean);

  size_t positives = 0;
  for (int label : y) positives += static_cast<size_t>(label);
  const double fraction =
      static_cast<double>(positives) / static_cast<double>(y.size());
  metrics.baseline_accuracy = std::max(fraction, 1.0 - fraction);
  return metrics;
}

ClusterEvaluation EvaluateClusterScores(
    std::span<const ClusterInstance> instances,
    std::span<const std::vector<double>> scores) {
  if (instances.empty()) throw Error(ErrorCode::kEmpty, "no cluster instances");
  ClusterEvaluation result;
  size_t hits = 0;
  for (size_t c = 0; c < instances.size(); ++c) {
    const ClusterInstance& instance = instances[c];
    const std::vector<double>& s = scores[c];
    std::vector<size_t> order(instance.members.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (s[a] != s[b]) return s[a] > s[b];
      return instance.members[a].cascade_id < instance.members[b].cascade_id;
    });
    const auto position =
        std::find(order.begin(), order.end(), instance.winner_index) -
        order.begin();
    const int rank = static_cast<int>(position) + 1;
    hits += rank == 1;
    result.winner_ranks.push_back(rank);
  }
  result.top1_accuracy =
      static_cast<double>(hits) / static_cast<double>(instances.size());
  result.mrr = Mrr(result.winner_ranks);
  return result;
}

ClusterEvaluation EvaluateCluster(const Model& model,
                                  std::span<const ClusterInstance> instances) {
  std::vector<std::vector<double>> scores;
  scores.reserve(instances.size());
  for (const ClusterInstance& instance : instances) {
    std::vector<double> s;
    for (const ClusterMember& member : instance.members) {
      s.push_back(PredictProba(model, member.features));
    }
    scores.push_back(std::move(s));
  }
  return EvaluateClusterScores(instances, scores);
}

}  // namespace cascade
