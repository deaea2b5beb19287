#pragma once

#include <span>
#include <vector>

#include "smash/ml/cart.hpp"

namespace smash::ml {

/// k nearest neighbours over z-scored features (training statistics).
struct KnnModel {
  Task task = Task::Classify;
  std::size_t k = 5;
  /// Set when k exceeded the training size and was reduced to it.
  bool k_clamped = false;
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<std::vector<double>> points;  // standardized
  std::vector<double> targets;

  /// Majority vote (ties to class 0) or mean target of the k nearest
  /// points; equal distances keep training order.
  double predict(std::span<const double> x) const;
};

/// Throws EmptyTraining.
KnnModel train_knn(const std::vector<std::vector<double>>& x, std::span<const double> y, Task task, std::size_t k = 5);

}  // namespace smash::ml
