#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace smash::ml {

enum class Task { Classify, Regress };
const char* to_string(Task t);

struct CartParams {
  std::optional<std::size_t> max_depth;
  /// Nodes with fewer examples become leaves.
  std::size_t min_leaf = 2;
  /// Search features on OpenMP threads. Results are identical either way.
  bool parallel = false;
};

struct CartNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1;   // x[feature] <= threshold
  int right = -1;  // x[feature] > threshold
  /// Leaf prediction: majority class or mean target.
  double value = 0.0;
  std::size_t samples = 0;
  /// Class counts (classification only).
  std::size_t count0 = 0;
  std::size_t count1 = 0;

  bool is_leaf() const { return feature < 0; }
};

struct CartModel {
  Task task = Task::Classify;
  std::vector<std::string> feature_names;
  std::vector<CartNode> nodes;  // nodes[0] is the root
  /// Impurity decrease per feature, normalized to sum 1 (all zero without
  /// splits).
  std::vector<double> importances;

  bool trained() const { return !nodes.empty(); }
  std::size_t depth() const;
  /// Throws UntrainedModel or UnseenFeatureDimension.
  double predict(std::span<const double> x) const;

  nlohmann::ordered_json to_json() const;
  static CartModel from_json(const nlohmann::json& j);
};

/// Greedy CART. Classification expects labels 0/1 and splits on Gini
/// impurity; regression splits on variance. Thresholds are midpoints
/// between consecutive distinct values; ties go to the lowest feature
/// index, then the lowest threshold. Throws EmptyTraining.
CartModel train_cart(const std::vector<std::vector<double>>& x, std::span<const double> y, Task task,
                     const CartParams& params = {}, std::vector<std::string> feature_names = {});

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  /// Weighted impurity decrease, n_node * (parent - children average).
  double gain = 0.0;
};

/// Best split of the given rows, searched one feature after another, or
/// over OpenMP threads with a deterministic reduction.
SplitCandidate best_split_serial(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                 std::span<const std::size_t> rows, Task task);
SplitCandidate best_split_parallel(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                   std::span<const std::size_t> rows, Task task);

}  // namespace smash::ml
