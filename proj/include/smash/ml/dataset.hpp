#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smash/features.hpp"

namespace smash::ml {

/// sgn(x) * ln(|x| + 1). Throws NonFinite.
double sign_log(double x);
/// Inverse of sign_log.
double sign_exp(double y);

struct LabeledExample {
  std::string id;
  FeatureVector features;
  double t_original = 0.0;
  double t_rewritten = 0.0;
  /// 1 iff the rewritten evaluation is strictly faster.
  int class_label = 0;
  /// sign_log(t_rewritten - t_original).
  double reg_target = 0.0;
};

LabeledExample label(const FeatureVector& features, double t_original, double t_rewritten, std::string id = {});

/// Indices into the example list.
struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  /// Ten folds partitioning train + validation.
  std::vector<std::vector<std::size_t>> folds;
};

/// Shuffled 80/10/10 split. Throws TooFewExamples below 20 examples.
Splits split_dataset(std::size_t n_examples, std::uint64_t seed, std::size_t n_folds = 10);

std::vector<std::vector<double>> feature_matrix(const std::vector<LabeledExample>& examples);

/// Header: id, the feature names, t_original, t_rewritten.
void write_dataset_csv(const std::string& path, const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> read_dataset_csv(const std::string& path);

}  // namespace smash::ml
