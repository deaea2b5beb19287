#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "smash/ml/cart.hpp"
#include "smash/ml/dataset.hpp"
#include "smash/ml/knn.hpp"

namespace smash::ml {

struct Metrics {
  double acc = 0.0;
  /// NaN when nothing was predicted positive; see prec_defined.
  double prec = std::numeric_limits<double>::quiet_NaN();
  bool prec_defined = false;
  double rec = 0.0;
  bool rec_defined = false;
  /// Regression error on the sign-log scale, when targets were given.
  double mse = 0.0;
  double mae = 0.0;
  bool has_regression = false;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Classes are 0/1. Throws LengthMismatch.
Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth);
/// Adds MSE and MAE between predicted and true regression targets.
Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth,
                        const std::vector<double>& predicted_target, const std::vector<double>& true_target);

enum class EvalMethod { Original, Rewritten };
const char* to_string(EvalMethod m);

/// Regression: Rewritten iff the predicted sign-log difference is strictly
/// below the threshold. Classification ignores the threshold.
EvalMethod decide(const CartModel& model, std::span<const double> x, double threshold = 0.0);
EvalMethod decide(const KnnModel& model, std::span<const double> x, double threshold = 0.0);

struct SweepPoint {
  double threshold = 0.0;
  Metrics metrics;
  /// Sum over examples of the chosen strategy's time.
  double e2e_seconds = 0.0;
};

std::vector<SweepPoint> threshold_sweep(const CartModel& model, const std::vector<LabeledExample>& examples,
                                        const std::vector<double>& grid);

/// Features with nonzero importance, descending (ties by feature order).
/// Throws UntrainedModel.
std::vector<std::pair<std::string, double>> gini_importances(const CartModel& model);

/// Metrics of a model's decisions on examples.
Metrics evaluate(const CartModel& model, const std::vector<LabeledExample>& examples, double threshold = 0.0);
Metrics evaluate(const KnnModel& model, const std::vector<LabeledExample>& examples, double threshold = 0.0);

std::vector<LabeledExample> subset(const std::vector<LabeledExample>& examples, const std::vector<std::size_t>& idx);

/// Train on the union of all folds but one and score the held-out fold.
std::vector<Metrics> cross_validate_serial(const std::vector<LabeledExample>& examples,
                                           const std::vector<std::vector<std::size_t>>& folds, Task task,
                                           const CartParams& params);
/// Same results, folds trained on OpenMP threads.
std::vector<Metrics> cross_validate_parallel(const std::vector<LabeledExample>& examples,
                                             const std::vector<std::vector<std::size_t>>& folds, Task task,
                                             const CartParams& params);

double mean_accuracy(const std::vector<Metrics>& folds);

/// Trains on examples using the class label or the regression target.
CartModel train_selector(const std::vector<LabeledExample>& examples, Task task, const CartParams& params = {});

}  // namespace smash::ml
