#pragma once

#include <vector>

namespace opk {

/// Degree / parameter / argument triple for one Charlier polynomial value.
/// The positivity regime used throughout the library is a > 1, u <= 0.
struct CharlierArgs {
  int k = 0;      // polynomial degree, k >= 0
  double a = 2.0; // Charlier parameter, a > 1
  double u = 0.0; // argument, u <= 0
};

/// (base)_count = base (base+1) ... (base+count-1); the empty product is 1.
double pochhammer(double base, int count);

/// Explicit finite sum  sum_{r=0}^{k} C(k,r) (-u)_r a^{-r}.
///
/// All terms are nonnegative for u <= 0, so the sum is cancellation-free,
/// but the terms overflow quickly with k * |u|.  This is the reference path
/// for small degrees; production weights come from weight_sequence().
double charlier_explicit(const CharlierArgs& args);

/// Truncated weight law  p_k = e^{-1} (1 - 1/a)^m C_k(-m) / k!.
///
/// Factoring the generating function e^t (1 - t/a)^{-m} shows that p is the
/// distribution of the sum of a Poisson(1) variable and an independent
/// generalized negative binomial variable with shape m and ratio 1/a, which
/// is how the weights are actually built.
struct WeightSeries {
  double m = 0.0;
  double a = 2.0;
  std::vector<double> weights; // p_0 .. p_K, all nonnegative
  double tail_mass = 0.0;      // 1 - sum(weights), clamped at 0
  int k_max() const { return static_cast<int>(weights.size()) - 1; }
};

double weight_law_mean(double m, double a);
double weight_law_stddev(double m, double a);

/// Default truncation cap: mean + 40 standard deviations + 64.
long long default_k_cap(double m, double a);

/// Builds p_0..p_K where K is the smallest index with accumulated mass
/// >= 1 - tail_tol, capped at k_cap (k_cap < 0 selects the default cap).
/// Throws truncation_failure when the mass target is not reached by k_cap.
WeightSeries weight_sequence(double m, double a, double tail_tol = 1e-14,
                             long long k_cap = -1);

}  // namespace opk
