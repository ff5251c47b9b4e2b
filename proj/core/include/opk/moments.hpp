#pragma once

#include <array>

#include "opk/operators.hpp"

namespace opk {

/// Closed-form vs series-computed moments at one (params, x) cell.
struct MomentReport {
  OperatorParams params;
  double x = 0.0;
  std::array<double, 3> raw_closed{};     // K(e_i; x), i = 0, 1, 2
  std::array<double, 3> raw_series{};
  std::array<double, 3> central_closed{}; // K((t-x)^i; x)
  std::array<double, 3> central_series{};
  double max_rel_err = 0.0;
};

/// Closed form of sum_k k^j p_k for the weight law with exponent m,
/// j in 0..4.  Written with mu = m/(a-1) and c = 1/(a-1):
///   j=0: 1
///   j=1: 1 + mu
///   j=2: 2 + (3+c) mu + mu^2
///   j=3: 5 + (10+6c+2c^2) mu + (6+3c) mu^2 + mu^3
///   j=4: 15 + (37+31c+20c^2+6c^3) mu + (31+30c+11c^2) mu^2 + (10+6c) mu^3 + mu^4
double weight_moment_closed(int j, double m, double a);

/// K(e_i; x) in closed form: 1, the first-moment expression, and x^2.
double raw_moment_closed(int i, double x, const OperatorParams& p);

/// K((t-x)^i; x) in closed form, evaluated through the rationalized quotient
/// against sqrt(D) + 2(n+beta)x so no cancellation occurs for large (n+beta)x.
double central_moment_closed(int i, double x, const OperatorParams& p);

/// Series value of the same moments using the truncated weight law and the
/// symbolic antiderivatives of t^i resp. (t-x)^i (no quadrature error).
double moment_series(int i, double x, const OperatorParams& p, bool central,
                     const ApplyOptions& opt = {});

/// All six closed/series pairs at one cell; max_rel_err is the largest
/// relative discrepancy.
MomentReport moment_report(double x, const OperatorParams& p,
                           const ApplyOptions& opt = {});

/// delta_{n,a}^{alpha,beta} = sqrt(K((t-x)^2; x)).
double kantorovich_delta(double x, const OperatorParams& p);

}  // namespace opk
