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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/cascade_model.h"
#include "cascade/error.h"
#include "cascade/learner.h"
#include "cascade/pipeline.h"
#include "cascade/random.h"
#include "cascade/stats.h"
#include "cascade/synth.h"
#include "cascade/tasks.h"
#include "cascade/virality.h"

namespace cascade {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [failed]";
    }
  }
};

std::string Fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, value);
  return buffer;
}

ReshareEvent Node(size_t i, std::optional<size_t> parent) {
  ReshareEvent e;
  e.cascade_id = "t";
  e.node_id = "v" + std::to_string(i);
  if (parent) e.parent_id = "v" + std::to_string(*parent);
  e.timestamp = static_cast<double>(i);
  return e;
}

CascadeTree TreeFromParents(const std::vector<size_t>& parents) {
  std::vector<ReshareEvent> events = {Node(0, std::nullopt)};
  for (size_t i = 0; i < parents.size(); ++i) {
    events.push_back(Node(i + 1, parents[i]));
  }
  return BuildCascade(std::move(events));
}

CascadeTree Star(size_t n) { return TreeFromParents(std::vector<size_t>(n - 1, 0)); }

CascadeTree Path(size_t n) {
  std::vector<size_t> parents(n - 1);
  std::iota(parents.begin(), parents.end(), size_t{0});
  return TreeFromParents(parents);
}

Verdict WienerOracle() {
  Verdict v;
  const auto start = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const size_t n = 2 + rng.UniformInt(199);
    std::vector<size_t> parents(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) parents[i] = rng.UniformInt(i + 1);
    const CascadeTree tree = TreeFromParents(parents);
    worst = std::max(worst,
                     std::abs(WienerIndex(tree) - WienerIndexBruteForce(tree)));
  }
  const double elapsed = Seconds(start);
  v.Check(worst < 1e-9, "500 trees, max |diff| " + Fmt("%.3g", worst));
  v.Check(elapsed < 10.0, Fmt("%.2fs", elapsed));
  return v;
}

Verdict ClosedForms() {
  Verdict v;
  size_t mismatches = 0;
  for (size_t n = 2; n <= 50; ++n) {
    // Star: n - 1 pairs at distance 1 and (n-1)(n-2)/2 at distance 2.
    const double pairs = static_cast<double>(n * (n - 1) / 2);
    const double star = static_cast<double>((n - 1) * (n - 1)) / pairs;
    const double path = static_cast<double>(n + 1) / 3.0;
    if (std::abs(WienerIndex(Star(n)) - star) > 1e-12 * star) ++mismatches;
    if (std::abs(WienerIndex(Path(n)) - path) > 1e-12 * path) ++mismatches;
  }
  v.Check(mismatches == 0,
          "n=2..50, mismatches " + std::to_string(mismatches));
  return v;
}

Verdict MedianDoubling() {
  Verdict v;
  const auto start = Clock::now();
  const std::vector<double> samples = SamplePowerLawSizes(2.0, 1.0, 1000000, 7);
  for (double k : {5.0, 10.0, 25.0, 50.0}) {
    std::vector<double> tail;
    for (double x : samples) {
      if (x >= k) tail.push_back(x);
    }
    const double ratio = Median(tail) / k;
    v.Check(ratio >= 1.9 && ratio <= 2.1,
            "k=" + Fmt("%g", k) + " median/k " + Fmt("%.4f", ratio));
  }
  const double elapsed = Seconds(start);
  v.Check(elapsed < 30.0, Fmt("%.2fs", elapsed));
  return v;
}

Verdict AlphaRecovery() {
  Verdict v;
  const double fitted =
      FitPowerLawAlpha(SamplePowerLawSizes(2.0, 1.0, 100000, 13), 1.0);
  v.Check(std::abs(fitted - 2.0) <= 0.05, "alpha " + Fmt("%.4f", fitted));
  const std::vector<double> worked = {2, 4, 8};
  const double hand = FitPowerLawAlpha(worked, 2.0);
  v.Check(std::abs(hand - 2.442695) <= 1e-6, "worked " + Fmt("%.7f", hand));
  return v;
}

// Synthetic data as cascades plus the social graph they grew on.
struct SyntheticData {
  SyntheticNetwork network;
  std::vector<Cascade> cascades;
};

SyntheticData Synthesize(const SynthParams& params, int threads) {
  SyntheticData data;
  data.network = GenerateSocialGraph(params, DeriveSeed(params.seed, 0));
  for (SyntheticCascade& c :
       SimulateCascades(data.network, params, DeriveSeed(params.seed, 1),
                        threads)) {
    data.cascades.push_back({BuildCascade(std::move(c.events)), c.content});
  }
  return data;
}

Metrics GrowthCv(const SyntheticData& data, size_t k, int threads) {
  TaskOptions options;
  options.graph = &data.network.graph;
  options.threads = threads;
  const LabeledTask task = LabelGrowth(data.cascades, k, options);
  const DesignMatrix design = ToDesignMatrix(task.examples);
  CrossValidationOptions cv;
  cv.folds = 10;
  cv.seed = 1;
  cv.threads = threads;
  return CrossValidate(design.x, design.y, cv);
}

SynthParams PlantedParams(double rate_boost) {
  SynthParams p;
  p.n_cascades = 10000;
  p.rate_boost = rate_boost;
  p.seed = 2024;
  return p;
}

Verdict PlantedSignal(Metrics* k5_out, const SyntheticData** data_out) {
  Verdict v;
  static SyntheticData planted;
  const auto start = Clock::now();
  planted = Synthesize(PlantedParams(3.0), 1);
  const Metrics boosted = GrowthCv(planted, 5, 1);
  const double elapsed = Seconds(start);
  v.Check(boosted.accuracy_mean >= 0.65,
          "accuracy " + Fmt("%.4f", boosted.accuracy_mean));
  v.Check(boosted.auc_mean >= 0.70, "AUC " + Fmt("%.4f", boosted.auc_mean));
  v.Check(elapsed < 120.0, "single-threaded " + Fmt("%.1fs", elapsed));

  const Metrics flat = GrowthCv(Synthesize(PlantedParams(1.0), 1), 5, 1);
  v.Check(flat.accuracy_mean <= 0.55,
          "rate_boost=1 accuracy " + Fmt("%.4f", flat.accuracy_mean));
  *k5_out = boosted;
  *data_out = &planted;
  return v;
}

Verdict WindowTrend(const SyntheticData& data, const Metrics& k5) {
  Verdict v;
  const Metrics k25 = GrowthCv(data, 25, 1);
  v.Check(k25.accuracy_mean >= k5.accuracy_mean - 0.02,
          "k=5 " + Fmt("%.4f", k5.accuracy_mean) + ", k=25 " +
              Fmt("%.4f", k25.accuracy_mean));
  return v;
}

Verdict LabelBalance() {
  Verdict v;
  size_t bad = 0, bad_quartiles = 0;
  Rng rng(5);
  for (size_t n : {2u, 3u, 10u, 11u, 100u, 101u, 999u}) {
    // Stars of distinct sizes 5..n+4 in shuffled order.
    std::vector<size_t> sizes(n);
    std::iota(sizes.begin(), sizes.end(), size_t{5});
    rng.Shuffle(std::span<size_t>(sizes));
    std::vector<Cascade> cascades;
    for (size_t i = 0; i < n; ++i) {
      std::vector<ReshareEvent> events = {Node(0, std::nullopt)};
      for (size_t j = 1; j <= sizes[i]; ++j) events.push_back(Node(j, 0));
      for (ReshareEvent& e : events) e.cascade_id = "c" + std::to_string(i);
      cascades.push_back({BuildCascade(std::move(events)), std::nullopt});
    }
    const LabeledTask task = LabelGrowth(cascades, 5);
    const double nd = static_cast<double>(n);
    if (task.positive_fraction < 0.5 ||
        task.positive_fraction > 0.5 + 1.0 / nd) {
      ++bad;
    }
    if (n >= 4) {
      TaskOptions quartiles;
      quartiles.quartiles = true;
      const LabeledTask q = LabelGrowth(cascades, 5, quartiles);
      size_t positives = 0;
      for (const LabeledExample& e : q.examples) positives += e.label;
      if (2 * positives != q.examples.size() || q.examples.empty()) {
        ++bad_quartiles;
      }
    }
  }
  v.Check(bad == 0, "distinct sizes, out of range " + std::to_string(bad));
  v.Check(bad_quartiles == 0,
          "quartiles, unbalanced " + std::to_string(bad_quartiles));
  return v;
}

Verdict MetricIdentities() {
  Verdict v;
  auto exact = [&](double got, double want, const std::string& name) {
    v.Check(got == want, name + "=" + Fmt("%.6g", got));
  };
  auto near = [&](double got, double want, double tol, const std::string& name) {
    v.Check(std::abs(got - want) <= tol, name + "=" + Fmt("%.6g", got));
  };
  const std::vector<double> s1 = {0.9, 0.8, 0.1}, s2 = {0.5, 0.5, 0.5},
                            s3 = {0.8, 0.6, 0.4};
  const std::vector<int> l1 = {1, 1, 0}, l2 = {1, 0, 1};
  exact(Auc(s1, l1), 1.0, "auc1");
  exact(Auc(s2, l2), 0.5, "auc_ties");
  exact(Auc(s3, l2), 0.5, "auc3");
  exact(F1(l1, l1), 1.0, "f1_exact");
  exact(F1(std::vector<int>{1, 1, 0}, l2), 0.5, "f1");
  exact(F1(std::vector<int>{0, 0, 0}, l2), 0.0, "f1_none");
  exact(Gini(std::vector<double>{1, 1, 1, 1}), 0.0, "gini_eq");
  exact(Gini(std::vector<double>{0, 0, 0, 10}), 0.75, "gini_onehot");
  exact(Gini(std::vector<double>{10}), 0.0, "gini_single");
  exact(Mrr(std::vector<int>{1, 1, 1}), 1.0, "mrr1");
  exact(Mrr(std::vector<int>{2, 2}), 0.5, "mrr2");
  near(Mrr(std::vector<int>{1, 2, 4}), 1.75 / 3.0, 1e-15, "mrr3");
  const std::vector<double> x = {1, 2, 3};
  near(Pearson(x, std::vector<double>{2, 4, 6}), 1.0, 1e-15, "r+");
  near(Pearson(x, std::vector<double>{6, 4, 2}), -1.0, 1e-15, "r-");
  near(Pearson(x, std::vector<double>{1, 2, 4}), 3.0 / std::sqrt(2.0 * 14.0 / 3.0),
       1e-12, "r");
  exact(FisherZCompare(0.3, 50, 0.3, 80).p_value, 1.0, "fisher_same");
  near(FisherZCompare(0.5, 103, 0.0, 103).p_value, 1.03e-4, 2e-5, "fisher_p");
  return v;
}

Verdict GradientCheck() {
  Verdict v;
  Rng rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 5 + rng.UniformInt(30);
    const size_t d = 1 + rng.UniformInt(6);
    Matrix x(n, d);
    std::vector<int> y(n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < d; ++j) x(i, j) = 4.0 * rng.Uniform01() - 2.0;
      y[i] = rng.Bernoulli(0.5);
    }
    std::vector<double> w(d);
    for (double& value : w) value = 2.0 * rng.Uniform01() - 1.0;
    const double b = rng.Uniform01() - 0.5;
    const double lambda = 0.1 * rng.Uniform01();
    std::vector<double> gradient;
    LogisticObjective(x, y, w, b, lambda, &gradient);
    const double h = 1e-5;
    double diff = 0.0, scale = 0.0;
    for (size_t j = 0; j <= d; ++j) {
      std::vector<double> wp = w, wm = w;
      double bp = b, bm = b;
      if (j < d) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double numeric = (LogisticObjective(x, y, wp, bp, lambda, nullptr) -
                              LogisticObjective(x, y, wm, bm, lambda, nullptr)) /
                             (2.0 * h);
      diff += (gradient[j] - numeric) * (gradient[j] - numeric);
      scale += numeric * numeric;
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12));
  }
  v.Check(worst < 1e-5, "20 instances, max relative error " + Fmt("%.3g", worst));
  return v;
}

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cascade_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Verdict ClusterTask() {
  Verdict v;
  SynthParams p;
  p.n_cascades = 0;
  p.n_clusters = 300;
  p.cluster_size = 10;
  p.rate_boost = 3.0;
  p.seed = 31;
  const fs::path dir = ScratchDir("cluster");
  const SyntheticData data = Synthesize(p, 1);
  Dataset dataset{data.cascades, data.network.graph};
  LabelOptions label;
  label.kind = LabelKind::kCluster;
  label.k = 5;
  label.m = 10;
  RunLabel(dataset, label, dir / "cluster.csv");
  const LabeledTable table = ReadLabeledTable(dir / "cluster.csv");
  const ClusterEvaluation eval = CrossValidateClusters(table, 10, 0.01, 1);
  v.Check(eval.winner_ranks.size() == 300,
          std::to_string(eval.winner_ranks.size()) + " instances");
  v.Check(eval.top1_accuracy >= 0.30, "top-1 " + Fmt("%.4f", eval.top1_accuracy));
  v.Check(eval.mrr >= 0.45, "MRR " + Fmt("%.4f", eval.mrr));
  fs::remove_all(dir);
  return v;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict Determinism() {
  Verdict v;
  std::stringstream text(
      "steps = generate,featurize,label,train,evaluate,report\n"
      "seed = 11\n"
      "k = 5\n"
      "report_k = 1,5,10\n"
      "synth.n_nodes = 5000\n"
      "synth.n_cascades = 3000\n"
      "synth.n_clusters = 30\n");
  const KeyValueDocument config = KeyValueDocument::Parse(text, "acceptance");
  const fs::path dir = ScratchDir("determinism");
  std::vector<std::pair<std::string, RunResult>> runs;
  for (const char* name : {"a1", "b1", "a8", "b8"}) {
    const int threads = name[1] == '8' ? 8 : 1;
    runs.emplace_back(name, RunPipeline(config, dir, dir / name, threads));
  }
  size_t compared = 0, differing = 0;
  const auto& reference = runs.front().second.outputs;
  for (const auto& [name, result] : runs) {
    if (result.outputs != reference) ++differing;
  }
  std::vector<fs::path> files = reference;
  files.emplace_back("manifest.txt");
  for (const fs::path& file : files) {
    const std::string expected = Slurp(dir / "a1" / file);
    for (const auto& [name, result] : runs) {
      ++compared;
      if (Slurp(dir / name / file) != expected) ++differing;
    }
  }
  v.Check(differing == 0 && !reference.empty(),
          std::to_string(files.size()) + " files x 4 runs (threads 1,1,8,8), " +
              std::to_string(differing) + " differing");
  fs::remove_all(dir);
  return v;
}

int Main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& fn) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failures;
    std::printf("A%-2d %s  %s: %s\n", id, v.pass ? "PASS" : "FAIL", name,
                v.detail.c_str());
    std::fflush(stdout);
  };

  Metrics k5;
  const SyntheticData* planted = nullptr;
  report(1, "wiener oracle equivalence", WienerOracle);
  report(2, "closed forms", ClosedForms);
  report(3, "median doubling", MedianDoubling);
  report(4, "alpha recovery", AlphaRecovery);
  report(5, "planted signal end to end",
         [&] { return PlantedSignal(&k5, &planted); });
  report(6, "observation window trend", [&] {
    if (planted == nullptr) {
      Verdict v;
      v.Check(false, "planted data unavailable");
      return v;
    }
    return WindowTrend(*planted, k5);
  });
  report(7, "label balance", LabelBalance);
  report(8, "metric identities", MetricIdentities);
  report(9, "gradient check", GradientCheck);
  report(10, "cluster task", ClusterTask);
  report(11, "determinism", Determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cascade

int main() { return cascade::Main(); }
