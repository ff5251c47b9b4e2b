#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "opk/charlier.hpp"
#include "opk/errors.hpp"

namespace opk {

/// The tuple (n, a, alpha, beta) that fixes one operator instance.
struct OperatorParams {
  int n = 1;          // operator index, n >= 1
  double a = 2.0;     // Charlier parameter, a > 1
  double alpha = 0.0; // Stancu shift, 0 <= alpha <= beta
  double beta = 0.0;

  double n_plus_beta() const { return static_cast<double>(n) + beta; }
  void validate() const; // throws invalid_parameter
};

enum class CenterMapKind { Identity, SzaszMap, KantorovichMap };

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double width() const { return hi - lo; }
};

enum class Growth { Bounded, ExponentialE };

/// A target function together with the metadata the certificates need.
/// analytic_modulus / analytic_second_modulus, when set, return rigorous
/// upper envelopes of the corresponding modulus over the given interval.
struct TestFunction {
  std::function<double(double)> evaluator;
  double domain_hi = std::numeric_limits<double>::infinity();
  Growth growth = Growth::ExponentialE;
  std::optional<double> lipschitz_const{};
  std::function<double(double, Interval)> analytic_modulus{};
  std::function<double(double, Interval)> analytic_second_modulus{};

  double operator()(double t) const {
    if (!(t >= 0.0) || t > domain_hi)
      throw evaluation_error("TestFunction: sample outside the evaluable range");
    return evaluator(t);
  }
};

/// Coefficients of the quadratic y^2 + b y = X - d satisfied by y = n rho(x),
/// where X = ((n+beta) x)^2 and rho is the requested center map.
struct CenterQuadratic {
  double b;
  double d;
};
CenterQuadratic center_quadratic(const OperatorParams& p, CenterMapKind kind);

/// X - d, clamped to 0 within rounding of the domain boundary.
/// Throws out_of_domain when x lies strictly below the map's domain.
double center_excess(double x, const OperatorParams& p, CenterMapKind kind);

/// Center map of the discrete (Szasz-type) operator; chosen so that the
/// operator reproduces t^2 exactly.
double center_map_szasz(double x, const OperatorParams& p);

/// Center map of the Kantorovich operator; reproduces t^2 exactly.
double center_map_kantorovich(double x, const OperatorParams& p);

/// Smallest x for which the chosen (non-identity) map is real and nonnegative:
/// sqrt(d) / (n + beta) with d from center_quadratic.
double domain_min_x(const OperatorParams& p, CenterMapKind kind);

/// rho(x) for the requested kind (x itself for Identity).
double center_value(double x, const OperatorParams& p, CenterMapKind kind);

struct ApplyOptions {
  double tail_tol = 1e-14;
  long long k_cap = -1; // < 0 selects the default cap
  int quad_order = 5;   // per-subinterval Gauss-Legendre order
};

/// Integral of f over [(k+alpha)/(n+beta), (k+alpha+1)/(n+beta)] by fixed
/// order Gauss-Legendre quadrature (exact for polynomials of degree
/// <= 2*quad_order - 1).
double interval_integral(const TestFunction& f, long long k,
                         const OperatorParams& p, int quad_order = 5);

/// sum_k p_k f((k+alpha)/(n+beta)) with p_k built from
/// weight_sequence(m = (a-1) n rho(x)).
double apply_discrete(const TestFunction& f, double x, const OperatorParams& p,
                      CenterMapKind kind, const ApplyOptions& opt = {});

/// (n+beta) sum_k p_k * integral of f over the k-th subinterval.
double apply_kantorovich(const TestFunction& f, double x,
                         const OperatorParams& p, CenterMapKind kind,
                         const ApplyOptions& opt = {});

}  // namespace opk
