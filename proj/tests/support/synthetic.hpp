#pragma once

#include <random>
#include <vector>

#include "smash/features.hpp"
#include "smash/ml/dataset.hpp"

namespace smash::testing {

/// Examples whose rewritten time is 0.3x the original for 0MA queries and
/// 1.5x otherwise. A `noise` fraction of examples has the regime swapped;
/// the other features are random distractors.
inline std::vector<ml::LabeledExample> two_regime_examples(std::size_t n, double noise, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ml::LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(kFeatureCount);
    for (auto& x : v) x = std::floor(u(rng) * 20.0);
    v[0] = u(rng) < 0.5 ? 1.0 : 0.0;
    bool fast = v[0] == 1.0;
    if (u(rng) < noise) fast = !fast;
    const double t_o = 0.5 + u(rng);
    const double t_r = fast ? 0.3 * t_o : 1.5 * t_o;
    out.push_back(ml::label(FeatureVector::from_values(v), t_o, t_r, "e" + std::to_string(i)));
  }
  return out;
}

}  // namespace smash::testing
