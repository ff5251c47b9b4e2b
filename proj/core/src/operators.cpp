#include "opk/operators.hpp"

#include <cmath>

#include "opk/quadrature.hpp"

namespace opk {

void OperatorParams::validate() const {
  if (n < 1) throw invalid_parameter("OperatorParams: requires n >= 1");
  if (!(a > 1.0)) throw invalid_parameter("OperatorParams: requires a > 1");
  if (!(alpha >= 0.0) || !(beta >= alpha))
    throw invalid_parameter("OperatorParams: requires 0 <= alpha <= beta");
}

CenterQuadratic center_quadratic(const OperatorParams& p, CenterMapKind kind) {
  const double c = 1.0 / (p.a - 1.0);
  switch (kind) {
    case CenterMapKind::SzaszMap:
      return {3.0 + 2.0 * p.alpha + c, 2.0 + 2.0 * p.alpha + p.alpha * p.alpha};
    case CenterMapKind::KantorovichMap:
      return {4.0 + 2.0 * p.alpha + c, 10.0 / 3.0 + 3.0 * p.alpha + p.alpha * p.alpha};
    default:
      throw invalid_parameter("center_quadratic: identity map has no quadratic");
  }
}

double center_excess(double x, const OperatorParams& p, CenterMapKind kind) {
  p.validate();
  if (!(x >= 0.0) || !std::isfinite(x))
    throw out_of_domain("center map: requires finite x >= 0");
  const CenterQuadratic q = center_quadratic(p, kind);
  const long double nbx = static_cast<long double>(p.n_plus_beta()) * x;
  long double excess = nbx * nbx - static_cast<long double>(q.d);
  if (excess < 0.0L) {
    // Allow rounding at the boundary x = sqrt(d)/(n+beta); below it the
    // weight exponent would go negative and positivity is lost.
    if (excess > -1e-13L * std::max<long double>(1.0L, q.d)) return 0.0;
    throw out_of_domain("center map: x below the map's domain");
  }
  return static_cast<double>(excess);
}

namespace {

double map_value(double x, const OperatorParams& p, CenterMapKind kind) {
  const CenterQuadratic q = center_quadratic(p, kind);
  const double excess = center_excess(x, p, kind);
  // Positive root of y^2 + b y = excess in rationalized form; y = n rho(x).
  const double y = 2.0 * excess / (q.b + std::sqrt(q.b * q.b + 4.0 * excess));
  return y / p.n;
}

WeightSeries weights_for(double x, const OperatorParams& p, CenterMapKind kind,
                         const ApplyOptions& opt) {
  const double rho = center_value(x, p, kind);
  return weight_sequence((p.a - 1.0) * p.n * rho, p.a, opt.tail_tol, opt.k_cap);
}

}  // namespace

double center_map_szasz(double x, const OperatorParams& p) {
  return map_value(x, p, CenterMapKind::SzaszMap);
}

double center_map_kantorovich(double x, const OperatorParams& p) {
  return map_value(x, p, CenterMapKind::KantorovichMap);
}

double domain_min_x(const OperatorParams& p, CenterMapKind kind) {
  p.validate();
  const CenterQuadratic q = center_quadratic(p, kind);
  return std::sqrt(q.d) / p.n_plus_beta();
}

double center_value(double x, const OperatorParams& p, CenterMapKind kind) {
  if (kind == CenterMapKind::Identity) {
    p.validate();
    if (!(x >= 0.0) || !std::isfinite(x))
      throw out_of_domain("identity center: requires finite x >= 0");
    return x;
  }
  return map_value(x, p, kind);
}

double interval_integral(const TestFunction& f, long long k,
                         const OperatorParams& p, int quad_order) {
  p.validate();
  if (k < 0) throw invalid_parameter("interval_integral: requires k >= 0");
  const auto& gl = gauss_legendre_nodes(quad_order);
  const double nb = p.n_plus_beta();
  const double mid = (static_cast<double>(k) + p.alpha + 0.5) / nb;
  const double half = 0.5 / nb;
  double s = 0.0;
  for (const QuadNode& node : gl) s += node.w * f(mid + node.x * half);
  return half * s;
}

double apply_discrete(const TestFunction& f, double x, const OperatorParams& p,
                      CenterMapKind kind, const ApplyOptions& opt) {
  const WeightSeries ws = weights_for(x, p, kind, opt);
  const double nb = p.n_plus_beta();
  long double acc = 0.0L;
  for (std::size_t k = 0; k < ws.weights.size(); ++k)
    acc += static_cast<long double>(ws.weights[k]) *
           f((static_cast<double>(k) + p.alpha) / nb);
  return static_cast<double>(acc);
}

double apply_kantorovich(const TestFunction& f, double x,
                         const OperatorParams& p, CenterMapKind kind,
                         const ApplyOptions& opt) {
  const WeightSeries ws = weights_for(x, p, kind, opt);
  const auto& gl = gauss_legendre_nodes(opt.quad_order);
  const double nb = p.n_plus_beta();
  const double half = 0.5 / nb;
  long double acc = 0.0L;
  for (std::size_t k = 0; k < ws.weights.size(); ++k) {
    const double mid = (static_cast<double>(k) + p.alpha + 0.5) / nb;
    double s = 0.0;
    for (const QuadNode& node : gl) s += node.w * f(mid + node.x * half);
    // (n+beta) * integral = (1/2) * sum of quadrature terms
    acc += static_cast<long double>(ws.weights[k]) * (0.5L * s);
  }
  return static_cast<double>(acc);
}

}  // namespace opk
