#include "smash/ml/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "smash/error.hpp"
#include "smash/random.hpp"

namespace smash::ml {

double sign_log(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "sign_log of a non-finite value");
  return std::copysign(std::log1p(std::fabs(x)), x);
}

double sign_exp(double y) { return std::copysign(std::expm1(std::fabs(y)), y); }

LabeledExample label(const FeatureVector& features, double t_original, double t_rewritten, std::string id) {
  LabeledExample e;
  e.id = std::move(id);
  e.features = features;
  e.t_original = t_original;
  e.t_rewritten = t_rewritten;
  e.class_label = t_rewritten < t_original ? 1 : 0;
  e.reg_target = sign_log(t_rewritten - t_original);
  return e;
}

Splits split_dataset(std::size_t n, std::uint64_t seed, std::size_t n_folds) {
  if (n < 20) throw Error(ErrorCode::TooFewExamples, "need at least 20 examples, got " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  shuffle(idx, rng);
  const auto n_train = n * 8 / 10;
  const auto n_val = (n - n_train) / 2;
  Splits s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                      idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  const auto pool = n_train + n_val;
  s.folds.resize(n_folds);
  // Fold sizes differ by at most one.
  for (std::size_t i = 0; i < pool; ++i) s.folds[i * n_folds / pool].push_back(idx[i]);
  return s;
}

std::vector<std::vector<double>> feature_matrix(const std::vector<LabeledExample>& examples) {
  std::vector<std::vector<double>> x;
  x.reserve(examples.size());
  for (const auto& e : examples) x.push_back(e.features.values());
  return x;
}

void write_dataset_csv(const std::string& path, const std::vector<LabeledExample>& examples) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << "id," << features_csv_header() << ",t_original,t_rewritten\n";
  for (const auto& e : examples)
    out << e.id << ',' << features_csv_row(e.features) << ',' << format_number(e.t_original) << ','
        << format_number(e.t_rewritten) << '\n';
}

std::vector<LabeledExample> read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::vector<LabeledExample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell, id;
    std::getline(ss, id, ',');
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != kFeatureCount + 2)
      throw Error(ErrorCode::UnseenFeatureDimension, "dataset row '" + id + "' has " + std::to_string(v.size()) + " numbers");
    const double t_rewr = v.back();
    v.pop_back();
    const double t_orig = v.back();
    v.pop_back();
    out.push_back(label(FeatureVector::from_values(v), t_orig, t_rewr, id));
  }
  return out;
}

}  // namespace smash::ml
