#include "smash/ml/cart.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smash/error.hpp"

namespace smash::ml {
namespace {

/// Running sums that give the impurity of a group of targets.
struct Sums {
  double n = 0.0;
  double s = 0.0;   // sum of y (count of class 1 for classification)
  double s2 = 0.0;  // sum of y^2

  void add(double y) {
    n += 1.0;
    s += y;
    s2 += y * y;
  }
  void remove(double y) {
    n -= 1.0;
    s -= y;
    s2 -= y * y;
  }
  /// Impurity times group size.
  double weighted(Task task) const {
    if (n <= 0.0) return 0.0;
    if (task == Task::Classify) {
      const double p = s / n;
      return n * (1.0 - p * p - (1.0 - p) * (1.0 - p));
    }
    return std::max(0.0, s2 - s * s / n);
  }
};

SplitCandidate best_for_feature(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                std::span<const std::size_t> rows, Task task, int f) {
  std::vector<std::size_t> order(rows.begin(), rows.end());
  const auto fi = static_cast<std::size_t>(f);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a][fi] < x[b][fi]; });
  Sums left, right;
  for (auto r : order) right.add(y[r]);
  const double parent = right.weighted(task);
  SplitCandidate best{f, 0.0, 0.0};
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    left.add(y[order[i]]);
    right.remove(y[order[i]]);
    const double a = x[order[i]][fi];
    const double b = x[order[i + 1]][fi];
    if (!(a < b)) continue;
    const double gain = parent - left.weighted(task) - right.weighted(task);
    // Strict comparison keeps the lowest threshold among equal gains.
    if (gain > best.gain) best = {f, a + (b - a) / 2.0, gain};
  }
  return best;
}

SplitCandidate reduce(const std::vector<SplitCandidate>& per_feature) {
  SplitCandidate best;
  for (const auto& c : per_feature)
    if (c.gain > best.gain) best = c;
  return best;
}

constexpr double kMinGain = 1e-12;

struct Builder {
  const std::vector<std::vector<double>>& x;
  std::span<const double> y;
  Task task;
  const CartParams& params;
  CartModel& model;
  std::vector<double> gains;

  int build(std::vector<std::size_t> rows, std::size_t depth) {
    Sums sums;
    for (auto r : rows) sums.add(y[r]);
    CartNode node;
    node.samples = rows.size();
    if (task == Task::Classify) {
      node.count1 = static_cast<std::size_t>(std::llround(sums.s));
      node.count0 = rows.size() - node.count1;
      node.value = node.count1 > node.count0 ? 1.0 : 0.0;
    } else {
      node.value = sums.s / sums.n;
    }
    const int id = static_cast<int>(model.nodes.size());
    model.nodes.push_back(node);

    const bool depth_ok = !params.max_depth || depth < *params.max_depth;
    if (!depth_ok || rows.size() < std::max<std::size_t>(params.min_leaf, 2) || sums.weighted(task) <= kMinGain) return id;
    const auto split = params.parallel ? best_split_parallel(x, y, rows, task) : best_split_serial(x, y, rows, task);
    if (split.feature < 0 || split.gain <= kMinGain) return id;

    std::vector<std::size_t> lo, hi;
    for (auto r : rows) (x[r][static_cast<std::size_t>(split.feature)] <= split.threshold ? lo : hi).push_back(r);
    gains[static_cast<std::size_t>(split.feature)] += split.gain;
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(lo), depth + 1);
    const int r = build(std::move(hi), depth + 1);
    auto& n = model.nodes[static_cast<std::size_t>(id)];
    n.feature = split.feature;
    n.threshold = split.threshold;
    n.left = l;
    n.right = r;
    return id;
  }
};

}  // namespace

const char* to_string(Task t) { return t == Task::Classify ? "classify" : "regress"; }

SplitCandidate best_split_serial(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                 std::span<const std::size_t> rows, Task task) {
  const auto d = static_cast<int>(x.empty() ? 0 : x.front().size());
  std::vector<SplitCandidate> per(static_cast<std::size_t>(d));
  for (int f = 0; f < d; ++f) per[static_cast<std::size_t>(f)] = best_for_feature(x, y, rows, task, f);
  return reduce(per);
}

SplitCandidate best_split_parallel(const std::vector<std::vector<double>>& x, std::span<const double> y,
                                   std::span<const std::size_t> rows, Task task) {
  const auto d = static_cast<int>(x.empty() ? 0 : x.front().size());
  std::vector<SplitCandidate> per(static_cast<std::size_t>(d));
#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < d; ++f) per[static_cast<std::size_t>(f)] = best_for_feature(x, y, rows, task, f);
  return reduce(per);
}

CartModel train_cart(const std::vector<std::vector<double>>& x, std::span<const double> y, Task task,
                     const CartParams& params, std::vector<std::string> feature_names) {
  if (x.empty() || x.size() != y.size()) throw Error(ErrorCode::EmptyTraining, "training set is empty or ragged");
  const auto d = x.front().size();
  if (d == 0) throw Error(ErrorCode::EmptyTraining, "training set has no features");
  for (const auto& row : x)
    if (row.size() != d) throw Error(ErrorCode::UnseenFeatureDimension, "training rows differ in length");
  if (feature_names.empty())
    for (std::size_t i = 0; i < d; ++i) feature_names.push_back("f" + std::to_string(i));
  if (feature_names.size() != d) throw Error(ErrorCode::UnseenFeatureDimension, "feature name count differs from row length");

  CartModel model;
  model.task = task;
  model.feature_names = std::move(feature_names);
  Builder b{x, y, task, params, model, std::vector<double>(d, 0.0)};
  std::vector<std::size_t> rows(x.size());
  std::iota(rows.begin(), rows.end(), 0);
  b.build(std::move(rows), 0);
  const double total = std::accumulate(b.gains.begin(), b.gains.end(), 0.0);
  model.importances.assign(d, 0.0);
  if (total > 0.0)
    for (std::size_t i = 0; i < d; ++i) model.importances[i] = b.gains[i] / total;
  return model;
}

std::size_t CartModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [id, dep] = stack.back();
    stack.pop_back();
    best = std::max(best, dep);
    const auto& n = nodes[static_cast<std::size_t>(id)];
    if (!n.is_leaf()) {
      stack.push_back({n.left, dep + 1});
      stack.push_back({n.right, dep + 1});
    }
  }
  return best;
}

double CartModel::predict(std::span<const double> x) const {
  if (nodes.empty()) throw Error(ErrorCode::UntrainedModel, "model has not been trained");
  if (x.size() != feature_names.size())
    throw Error(ErrorCode::UnseenFeatureDimension, "model expects " + std::to_string(feature_names.size()) +
                                                       " features, got " + std::to_string(x.size()));
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].value;
}

nlohmann::ordered_json CartModel::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = to_string(task);
  j["feature_names"] = feature_names;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    nlohmann::ordered_json o;
    if (n.is_leaf()) {
      o["leaf"] = true;
      o["value"] = n.value;
    } else {
      o["feature"] = n.feature;
      o["threshold"] = n.threshold;
      o["left"] = n.left;
      o["right"] = n.right;
    }
    o["samples"] = n.samples;
    if (task == Task::Classify) o["counts"] = {n.count0, n.count1};
    arr.push_back(std::move(o));
  }
  j["nodes"] = std::move(arr);
  j["importances"] = importances;
  return j;
}

CartModel CartModel::from_json(const nlohmann::json& j) {
  CartModel m;
  const auto task = j.at("task").get<std::string>();
  if (task != "classify" && task != "regress") throw Error(ErrorCode::ParseError, "unknown task '" + task + "'");
  m.task = task == "classify" ? Task::Classify : Task::Regress;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& o : j.at("nodes")) {
    CartNode n;
    if (o.value("leaf", false)) {
      n.value = o.at("value").get<double>();
    } else {
      n.feature = o.at("feature").get<int>();
      n.threshold = o.at("threshold").get<double>();
      n.left = o.at("left").get<int>();
      n.right = o.at("right").get<int>();
    }
    n.samples = o.value("samples", std::size_t{0});
    if (o.contains("counts")) {
      n.count0 = o["counts"][0].get<std::size_t>();
      n.count1 = o["counts"][1].get<std::size_t>();
    }
    m.nodes.push_back(n);
  }
  const auto size = static_cast<int>(m.nodes.size());
  for (const auto& n : m.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= size || n.right >= size ||
                         n.feature >= static_cast<int>(m.feature_names.size())))
      throw Error(ErrorCode::ParseError, "model JSON has a dangling node reference");
  m.importances = j.at("importances").get<std::vector<double>>();
  return m;
}

}  // namespace smash::ml
