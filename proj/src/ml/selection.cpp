#include "smash/ml/selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "smash/error.hpp"

namespace smash::ml {
namespace {

template <typename Model>
EvalMethod decide_with(const Model& model, std::span<const double> x, double threshold) {
  const double p = model.predict(x);
  if (model.task == Task::Classify) return p >= 0.5 ? EvalMethod::Rewritten : EvalMethod::Original;
  return p < threshold ? EvalMethod::Rewritten : EvalMethod::Original;
}

template <typename Model>
Metrics evaluate_with(const Model& model, const std::vector<LabeledExample>& examples, double threshold) {
  std::vector<int> pred, truth;
  std::vector<double> pt, tt;
  for (const auto& e : examples) {
    const auto x = e.features.values();
    pred.push_back(decide_with(model, x, threshold) == EvalMethod::Rewritten ? 1 : 0);
    truth.push_back(e.class_label);
    if (model.task == Task::Regress) {
      pt.push_back(model.predict(x));
      tt.push_back(e.reg_target);
    }
  }
  return model.task == Task::Regress ? compute_metrics(pred, truth, pt, tt) : compute_metrics(pred, truth);
}

std::vector<double> targets(const std::vector<LabeledExample>& examples, Task task) {
  std::vector<double> y;
  y.reserve(examples.size());
  for (const auto& e : examples) y.push_back(task == Task::Classify ? e.class_label : e.reg_target);
  return y;
}

Metrics fold_metrics(const std::vector<LabeledExample>& examples, const std::vector<std::vector<std::size_t>>& folds,
                     std::size_t held_out, Task task, CartParams params) {
  params.parallel = false;
  std::vector<std::size_t> train_idx;
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (f != held_out) train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());
  const auto model = train_selector(subset(examples, train_idx), task, params);
  return evaluate(model, subset(examples, folds[held_out]));
}

}  // namespace

Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw Error(ErrorCode::LengthMismatch, "predictions and truths differ in length or are empty");
  Metrics m;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++m.tp;
    else if (p) ++m.fp;
    else if (t) ++m.fn;
    else ++m.tn;
  }
  m.acc = static_cast<double>(m.tp + m.tn) / static_cast<double>(predicted.size());
  m.prec_defined = m.tp + m.fp > 0;
  m.prec = m.prec_defined ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp)
                          : std::numeric_limits<double>::quiet_NaN();
  m.rec_defined = m.tp + m.fn > 0;
  m.rec = m.rec_defined ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn)
                        : std::numeric_limits<double>::quiet_NaN();
  return m;
}

Metrics compute_metrics(const std::vector<int>& predicted, const std::vector<int>& truth,
                        const std::vector<double>& predicted_target, const std::vector<double>& true_target) {
  auto m = compute_metrics(predicted, truth);
  if (predicted_target.size() != true_target.size() || predicted_target.size() != predicted.size())
    throw Error(ErrorCode::LengthMismatch, "regression targets differ in length");
  for (std::size_t i = 0; i < predicted_target.size(); ++i) {
    const double e = predicted_target[i] - true_target[i];
    m.mse += e * e;
    m.mae += std::fabs(e);
  }
  m.mse /= static_cast<double>(predicted_target.size());
  m.mae /= static_cast<double>(predicted_target.size());
  m.has_regression = true;
  return m;
}

const char* to_string(EvalMethod m) { return m == EvalMethod::Original ? "Original" : "Rewritten"; }

EvalMethod decide(const CartModel& model, std::span<const double> x, double threshold) {
  return decide_with(model, x, threshold);
}

EvalMethod decide(const KnnModel& model, std::span<const double> x, double threshold) {
  return decide_with(model, x, threshold);
}

std::vector<SweepPoint> threshold_sweep(const CartModel& model, const std::vector<LabeledExample>& examples,
                                        const std::vector<double>& grid) {
  std::vector<double> scores;
  for (const auto& e : examples) scores.push_back(model.predict(e.features.values()));
  std::vector<SweepPoint> out;
  for (double t : grid) {
    std::vector<int> pred, truth;
    double total = 0.0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      const bool rewrite = scores[i] < t;
      pred.push_back(rewrite ? 1 : 0);
      truth.push_back(examples[i].class_label);
      total += rewrite ? examples[i].t_rewritten : examples[i].t_original;
    }
    out.push_back({t, compute_metrics(pred, truth), total});
  }
  return out;
}

std::vector<std::pair<std::string, double>> gini_importances(const CartModel& model) {
  if (!model.trained()) throw Error(ErrorCode::UntrainedModel, "model has not been trained");
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < model.importances.size(); ++i)
    if (model.importances[i] > 0.0) out.emplace_back(model.feature_names[i], model.importances[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

Metrics evaluate(const CartModel& model, const std::vector<LabeledExample>& examples, double threshold) {
  return evaluate_with(model, examples, threshold);
}

Metrics evaluate(const KnnModel& model, const std::vector<LabeledExample>& examples, double threshold) {
  return evaluate_with(model, examples, threshold);
}

std::vector<LabeledExample> subset(const std::vector<LabeledExample>& examples, const std::vector<std::size_t>& idx) {
  std::vector<LabeledExample> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(examples.at(i));
  return out;
}

std::vector<Metrics> cross_validate_serial(const std::vector<LabeledExample>& examples,
                                           const std::vector<std::vector<std::size_t>>& folds, Task task,
                                           const CartParams& params) {
  std::vector<Metrics> out;
  for (std::size_t f = 0; f < folds.size(); ++f) out.push_back(fold_metrics(examples, folds, f, task, params));
  return out;
}

std::vector<Metrics> cross_validate_parallel(const std::vector<LabeledExample>& examples,
                                             const std::vector<std::vector<std::size_t>>& folds, Task task,
                                             const CartParams& params) {
  std::vector<Metrics> out(folds.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(folds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    try {
      out[static_cast<std::size_t>(f)] = fold_metrics(examples, folds, static_cast<std::size_t>(f), task, params);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double mean_accuracy(const std::vector<Metrics>& folds) {
  if (folds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& m : folds) s += m.acc;
  return s / static_cast<double>(folds.size());
}

CartModel train_selector(const std::vector<LabeledExample>& examples, Task task, const CartParams& params) {
  if (examples.empty()) throw Error(ErrorCode::EmptyTraining, "no training examples");
  return train_cart(feature_matrix(examples), targets(examples, task), task, params, FeatureVector::names());
}

}  // namespace smash::ml
