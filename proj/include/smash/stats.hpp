#pragma once

#include <span>

namespace smash::stats {

struct WilcoxonResult {
  /// min(W+, W-) with average ranks for tied |d|.
  double statistic = 0.0;
  double p_two_sided = 1.0;
  /// Nonzero differences ranked.
  std::size_t n = 0;
  bool exact = false;
};

/// Differences d = a - b; zero differences are dropped. Exact null
/// distribution for n <= 25, otherwise a normal approximation with tie
/// correction and continuity correction. Throws LengthMismatch,
/// AllDifferencesZero or TooFewPairs.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct TTestResult {
  double t = 0.0;
  double p_two_sided = 1.0;
  double df = 0.0;
};

/// t = mean(d) * sqrt(n) / sd(d) with d = a - b, n - 1 degrees of
/// freedom. Throws LengthMismatch, TooFewPairs or ZeroVariance.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
/// Two-sided tail probability P(|T| >= |t|) of Student's t.
double student_t_two_sided(double t, double df);

}  // namespace smash::stats
