#include "smash/ml/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smash/error.hpp"

namespace smash::ml {

KnnModel train_knn(const std::vector<std::vector<double>>& x, std::span<const double> y, Task task, std::size_t k) {
  if (x.empty() || x.size() != y.size() || x.front().empty() || k == 0)
    throw Error(ErrorCode::EmptyTraining, "training set is empty or ragged");
  const auto d = x.front().size();
  const auto n = static_cast<double>(x.size());
  KnnModel m;
  m.task = task;
  m.k = std::min(k, x.size());
  m.k_clamped = m.k != k;
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 0.0);
  for (const auto& row : x) {
    if (row.size() != d) throw Error(ErrorCode::UnseenFeatureDimension, "training rows differ in length");
    for (std::size_t j = 0; j < d; ++j) m.mean[j] += row[j] / n;
  }
  for (const auto& row : x)
    for (std::size_t j = 0; j < d; ++j) m.scale[j] += (row[j] - m.mean[j]) * (row[j] - m.mean[j]) / n;
  for (auto& s : m.scale) s = s > 0.0 ? std::sqrt(s) : 1.0;
  for (const auto& row : x) {
    std::vector<double> z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = (row[j] - m.mean[j]) / m.scale[j];
    m.points.push_back(std::move(z));
  }
  m.targets.assign(y.begin(), y.end());
  return m;
}

double KnnModel::predict(std::span<const double> x) const {
  if (points.empty()) throw Error(ErrorCode::UntrainedModel, "model has not been trained");
  if (x.size() != mean.size())
    throw Error(ErrorCode::UnseenFeatureDimension, "model expects " + std::to_string(mean.size()) + " features");
  std::vector<std::pair<double, std::size_t>> dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double z = (x[j] - mean[j]) / scale[j] - points[i][j];
      s += z * z;
    }
    dist[i] = {s, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += targets[dist[i].second];
  if (task == Task::Regress) return sum / static_cast<double>(k);
  return sum * 2.0 > static_cast<double>(k) ? 1.0 : 0.0;
}

}  // namespace smash::ml
