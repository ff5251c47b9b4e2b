#include "opk/moments.hpp"

#include <algorithm>
#include <cmath>

#include "opk/errors.hpp"

namespace opk {

double weight_moment_closed(int j, double m, double a) {
  if (!(m >= 0.0)) throw invalid_parameter("weight_moment_closed: requires m >= 0");
  if (!(a > 1.0)) throw invalid_parameter("weight_moment_closed: requires a > 1");
  const double c = 1.0 / (a - 1.0);
  const double mu = m / (a - 1.0);
  switch (j) {
    case 0:
      return 1.0;
    case 1:
      return 1.0 + mu;
    case 2:
      return 2.0 + (3.0 + c) * mu + mu * mu;
    case 3:
      return 5.0 + (10.0 + c * (6.0 + 2.0 * c)) * mu + (6.0 + 3.0 * c) * mu * mu +
             mu * mu * mu;
    case 4:
      return 15.0 + (37.0 + c * (31.0 + c * (20.0 + 6.0 * c))) * mu +
             (31.0 + c * (30.0 + 11.0 * c)) * mu * mu +
             (10.0 + 6.0 * c) * mu * mu * mu + mu * mu * mu * mu;
    default:
      throw invalid_parameter("weight_moment_closed: unsupported order");
  }
}

namespace {

// Shared pieces of the closed Kantorovich moments at (x, p):
//   S  = sqrt(b^2 + 4 ((n+beta)^2 x^2 - d))      (b, d of the Kantorovich map)
//   G  = S + 2 (n+beta) x
//   E2 = b^2 - 4 d expanded exactly: 8/3 + 4a' + (8+4a') c + c^2, a' = alpha
//   Q  = (1+c) G - E2   (> 0 on the whole domain)
struct KCore {
  double nb, c, S, G, E2, Q;
};

KCore kcore(double x, const OperatorParams& p) {
  const CenterQuadratic q = center_quadratic(p, CenterMapKind::KantorovichMap);
  const double excess = center_excess(x, p, CenterMapKind::KantorovichMap);
  const double nb = p.n_plus_beta();
  const double c = 1.0 / (p.a - 1.0);
  const double S = std::sqrt(q.b * q.b + 4.0 * excess);
  const double G = S + 2.0 * nb * x;
  const double E2 = 8.0 / 3.0 + 4.0 * p.alpha + (8.0 + 4.0 * p.alpha) * c + c * c;
  const double Q = (1.0 + c) * G - E2;
  return {nb, c, S, G, E2, Q};
}

struct SeriesMoments {
  std::array<double, 3> raw;
  std::array<double, 3> central;
};

SeriesMoments series_moments(const WeightSeries& ws, double x,
                             const OperatorParams& p) {
  const double nb = p.n_plus_beta();
  long double r0 = 0.0L, r1 = 0.0L, r2 = 0.0L, c1 = 0.0L, c2 = 0.0L;
  for (std::size_t k = 0; k < ws.weights.size(); ++k) {
    const double w = ws.weights[k];
    const double kap = static_cast<double>(k) + p.alpha;
    // (n+beta) * integral of t^i over the k-th subinterval, antiderivatives
    // evaluated symbolically
    r0 += w;
    r1 += static_cast<long double>(w) * ((2.0 * kap + 1.0) / (2.0 * nb));
    r2 += static_cast<long double>(w) * ((3.0 * kap * kap + 3.0 * kap + 1.0) / (3.0 * nb * nb));
    const double u = (kap + 1.0) / nb - x;
    const double v = kap / nb - x;
    c1 += static_cast<long double>(w) * (0.5 * (u + v));
    c2 += static_cast<long double>(w) * ((u * u + u * v + v * v) / 3.0);
  }
  return {{static_cast<double>(r0), static_cast<double>(r1), static_cast<double>(r2)},
          {static_cast<double>(r0), static_cast<double>(c1), static_cast<double>(c2)}};
}

double rel_discrepancy(double closed, double series) {
  const double scale = std::max({std::abs(closed), std::abs(series), 1e-30});
  return std::abs(closed - series) / scale;
}

}  // namespace

double raw_moment_closed(int i, double x, const OperatorParams& p) {
  switch (i) {
    case 0:
      p.validate();
      (void)center_excess(x, p, CenterMapKind::KantorovichMap);
      return 1.0;
    case 1: {
      const KCore kc = kcore(x, p);
      return (kc.S - (1.0 + kc.c)) / (2.0 * kc.nb);
    }
    case 2:
      (void)center_excess(x, p, CenterMapKind::KantorovichMap);
      return x * x;
    default:
      throw invalid_parameter("raw_moment_closed: requires i in 0..2");
  }
}

double central_moment_closed(int i, double x, const OperatorParams& p) {
  switch (i) {
    case 0:
      (void)center_excess(x, p, CenterMapKind::KantorovichMap);
      return 1.0;
    case 1: {
      const KCore kc = kcore(x, p);
      return -kc.Q / (2.0 * kc.nb * kc.G);
    }
    case 2: {
      const KCore kc = kcore(x, p);
      return x * kc.Q / (kc.nb * kc.G);
    }
    default:
      throw invalid_parameter("central_moment_closed: requires i in 0..2");
  }
}

double moment_series(int i, double x, const OperatorParams& p, bool central,
                     const ApplyOptions& opt) {
  if (i < 0 || i > 2) throw invalid_parameter("moment_series: requires i in 0..2");
  p.validate();
  const double rho = center_map_kantorovich(x, p);
  const WeightSeries ws =
      weight_sequence((p.a - 1.0) * p.n * rho, p.a, opt.tail_tol, opt.k_cap);
  const SeriesMoments sm = series_moments(ws, x, p);
  return central ? sm.central[i] : sm.raw[i];
}

MomentReport moment_report(double x, const OperatorParams& p,
                           const ApplyOptions& opt) {
  p.validate();
  MomentReport rep;
  rep.params = p;
  rep.x = x;
  rep.raw_closed = {raw_moment_closed(0, x, p), raw_moment_closed(1, x, p),
                    raw_moment_closed(2, x, p)};
  rep.central_closed = {central_moment_closed(0, x, p),
                        central_moment_closed(1, x, p),
                        central_moment_closed(2, x, p)};
  const double rho = center_map_kantorovich(x, p);
  const WeightSeries ws =
      weight_sequence((p.a - 1.0) * p.n * rho, p.a, opt.tail_tol, opt.k_cap);
  const SeriesMoments sm = series_moments(ws, x, p);
  rep.raw_series = sm.raw;
  rep.central_series = sm.central;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, rel_discrepancy(rep.raw_closed[i], rep.raw_series[i]));
    worst = std::max(worst, rel_discrepancy(rep.central_closed[i], rep.central_series[i]));
  }
  rep.max_rel_err = worst;
  return rep;
}

double kantorovich_delta(double x, const OperatorParams& p) {
  return std::sqrt(central_moment_closed(2, x, p));
}

}  // namespace opk
