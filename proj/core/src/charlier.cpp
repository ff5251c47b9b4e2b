#include "opk/charlier.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "opk/errors.hpp"

namespace opk {

namespace {
// exp() underflows to 0 below roughly -745; weights that small carry no mass.
constexpr long double kLogTiny = -745.0L;
}

double pochhammer(double base, int count) {
  if (count < 0) throw invalid_parameter("pochhammer: count must be >= 0");
  double out = 1.0;
  for (int i = 0; i < count; ++i) out *= base + i;
  return out;
}

double charlier_explicit(const CharlierArgs& args) {
  if (args.k < 0) throw invalid_parameter("charlier_explicit: degree must be >= 0");
  if (!(args.a > 1.0)) throw invalid_parameter("charlier_explicit: requires a > 1");
  if (args.u > 0.0) throw invalid_parameter("charlier_explicit: requires u <= 0");
  // term_r = C(k,r) (-u)_r a^{-r}; ratio recurrence keeps every term exact
  // up to rounding and avoids factorial overflow for moderate k.
  double sum = 1.0;
  double term = 1.0;
  for (int r = 1; r <= args.k; ++r) {
    term *= (static_cast<double>(args.k - r + 1) / r) * ((-args.u + (r - 1)) / args.a);
    sum += term;
  }
  return sum;
}

double weight_law_mean(double m, double a) { return 1.0 + m / (a - 1.0); }

double weight_law_stddev(double m, double a) {
  // Var = Var(Poisson(1)) + Var(NB(m, 1/a)) = 1 + m a / (a-1)^2
  return std::sqrt(1.0 + m * a / ((a - 1.0) * (a - 1.0)));
}

long long default_k_cap(double m, double a) {
  const double cap = weight_law_mean(m, a) + 40.0 * weight_law_stddev(m, a);
  return static_cast<long long>(std::ceil(cap)) + 64;
}

WeightSeries weight_sequence(double m, double a, double tail_tol, long long k_cap) {
  if (!(m >= 0.0) || !std::isfinite(m))
    throw invalid_parameter("weight_sequence: requires m >= 0");
  if (!(a > 1.0)) throw invalid_parameter("weight_sequence: requires a > 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    throw invalid_parameter("weight_sequence: requires 0 < tail_tol < 1");
  if (k_cap < 0) k_cap = default_k_cap(m, a);
  k_cap = std::max<long long>(k_cap, 1);

  // Poisson(1) factor; its own tail is truncated far below tail_tol.
  std::vector<double> pois;
  for (double pv = std::exp(-1.0);;) {
    pois.push_back(pv);
    if (pv < 1e-25 || static_cast<long long>(pois.size()) > k_cap) break;
    pv /= static_cast<double>(pois.size());
  }

  // Generalized negative binomial factor (shape m, ratio 1/a).  The ratio
  // recurrence nb_{i+1} = nb_i (m+i)/(i+1) / a runs in log space so that
  // large m cannot underflow on the way up to the mode; entries below the
  // representable range are flushed to zero.
  std::vector<double> nb;
  if (m == 0.0) {
    nb.push_back(1.0);
  } else {
    const long double q = 1.0L / static_cast<long double>(a);
    const long double nb_tol = static_cast<long double>(tail_tol) * 1e-2L;
    detail::KahanSum<long double> lnb;
    lnb.sum = static_cast<long double>(m) * log1pl(-q);
    long double cum = 0.0L;
    for (long long i = 0; i <= k_cap; ++i) {
      const double v = (lnb.sum < kLogTiny) ? 0.0 : static_cast<double>(expl(lnb.sum));
      nb.push_back(v);
      cum += v;
      if (cum >= 1.0L - nb_tol) break;
      lnb.add(logl((static_cast<long double>(m) + i) * q / static_cast<long double>(i + 1)));
    }
  }

  // p = pois (*) nb, accumulated until the mass target is reached.
  WeightSeries out;
  out.m = m;
  out.a = a;
  const long long pois_hi = static_cast<long long>(pois.size()) - 1;
  const long long nb_hi = static_cast<long long>(nb.size()) - 1;
  long double cum = 0.0L;
  bool reached = false;
  for (long long k = 0; k <= k_cap; ++k) {
    const long long jlo = std::max<long long>(0, k - nb_hi);
    const long long jhi = std::min<long long>(k, pois_hi);
    long double s = 0.0L;
    for (long long j = jlo; j <= jhi; ++j)
      s += static_cast<long double>(pois[j]) * nb[k - j];
    out.weights.push_back(static_cast<double>(s));
    cum += s;
    if (cum >= 1.0L - static_cast<long double>(tail_tol)) {
      reached = true;
      break;
    }
  }
  if (!reached)
    throw truncation_failure("weight_sequence: mass 1 - tail_tol not reached by k_cap");
  out.tail_mass = std::max(0.0, static_cast<double>(1.0L - cum));
  return out;
}

}  // namespace opk
