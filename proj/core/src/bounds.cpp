#include "opk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace opk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform grid with both endpoints included; the step is rounded down so the
// span divides evenly.
struct UniformGrid {
  double lo, step;
  long long count; // number of points

  double point(long long i) const { return lo + static_cast<double>(i) * step; }
};

UniformGrid make_grid(Interval domain, double step) {
  if (!(step > 0.0) || !std::isfinite(domain.width()) || !(domain.width() > 0.0))
    throw invalid_parameter("modulus grid: requires a finite domain and step > 0");
  const long long n =
      std::max<long long>(1, static_cast<long long>(std::ceil(domain.width() / step)));
  return {domain.lo, domain.width() / static_cast<double>(n), n + 1};
}

// Symmetric second-difference supremum shared by the classical and the
// Ditzian-Totik moduli; lambda = 0 reduces to the classical one exactly.
double second_difference_sup(const TestFunction& f, double delta, double lambda,
                             Interval domain, double step) {
  const UniformGrid g = make_grid(domain, step);
  const double floor_x = std::max(domain.lo, 0.0);

  std::vector<double> hs;
  const long long ladder = static_cast<long long>(delta / g.step);
  if (ladder <= 4096) {
    for (long long j = 1; j <= ladder; ++j) {
      const double h = static_cast<double>(j) * g.step;
      if (h < delta) hs.push_back(h);
    }
  } else {
    for (int j = 1; j < 4096; ++j) hs.push_back(delta * j / 4096.0);
  }
  hs.push_back(delta);

  double best = 0.0;
  for (const double h : hs) {
    for (long long i = 0; i < g.count; ++i) {
      const double x = (i + 1 == g.count) ? domain.hi : g.point(i);
      const double phi = (lambda == 0.0) ? 1.0 : std::pow(x, 0.5 * lambda);
      const double off = h * phi;
      double t1 = x - off;
      double t2 = x + off;
      const double slack = 1e-12 * (1.0 + std::abs(x));
      if (t1 < floor_x) {
        if (t1 < floor_x - slack) continue;
        t1 = floor_x;
      }
      if (t2 > domain.hi) {
        if (t2 > domain.hi + slack) continue;
        t2 = domain.hi;
      }
      best = std::max(best, std::abs(f(t1) - 2.0 * f(x) + f(t2)));
    }
  }
  return best;
}

}  // namespace

ModulusEstimate modulus_estimate(const TestFunction& f, double delta,
                                 Interval domain, double step) {
  if (!(delta > 0.0)) throw invalid_parameter("modulus_estimate: requires delta > 0");
  if (f.analytic_modulus)
    return {ModulusKind::Omega, 0.0, delta, f.analytic_modulus(delta, domain), 0.0, false};
  if (!(step > 0.0) || step > delta / 8.0)
    throw invalid_parameter("modulus_estimate: requires 0 < step <= delta/8");
  const UniformGrid g = make_grid(domain, step);
  std::vector<double> vals(static_cast<std::size_t>(g.count));
  for (long long i = 0; i < g.count; ++i)
    vals[static_cast<std::size_t>(i)] = f((i + 1 == g.count) ? domain.hi : g.point(i));
  const long long window = static_cast<long long>(delta / g.step + 1e-9);
  double best = 0.0;
  for (long long i = 0; i < g.count; ++i) {
    const long long jmax = std::min(g.count - 1, i + window);
    for (long long j = i + 1; j <= jmax; ++j)
      best = std::max(best, std::abs(vals[static_cast<std::size_t>(j)] -
                                     vals[static_cast<std::size_t>(i)]));
  }
  return {ModulusKind::Omega, 0.0, delta, best, g.step, true};
}

ModulusEstimate second_modulus_estimate(const TestFunction& f, double delta,
                                        Interval domain, double step) {
  if (!(delta > 0.0))
    throw invalid_parameter("second_modulus_estimate: requires delta > 0");
  if (f.analytic_second_modulus)
    return {ModulusKind::Omega2, 0.0, delta, f.analytic_second_modulus(delta, domain),
            0.0, false};
  const double value = second_difference_sup(f, delta, 0.0, domain, step);
  return {ModulusKind::Omega2, 0.0, delta, value, step, true};
}

ModulusEstimate dt_modulus_estimate(const TestFunction& f, double delta,
                                    double lambda, Interval domain, double step) {
  if (!(delta > 0.0)) throw invalid_parameter("dt_modulus_estimate: requires delta > 0");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw invalid_parameter("dt_modulus_estimate: requires 0 <= lambda <= 1");
  if (lambda == 0.0 && f.analytic_second_modulus)
    return {ModulusKind::DitzianTotik, 0.0, delta,
            f.analytic_second_modulus(delta, domain), 0.0, false};
  const double value = second_difference_sup(f, delta, lambda, domain, step);
  return {ModulusKind::DitzianTotik, lambda, delta, value, step, true};
}

std::string_view theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::T3_1: return "3.1";
    case TheoremId::T3_2: return "3.2";
    case TheoremId::T4_1: return "4.1";
    case TheoremId::T4_2: return "4.2";
    case TheoremId::T4_3: return "4.3";
    case TheoremId::RemarkCompare: return "remark";
    case TheoremId::Korovkin3_3: return "3.3";
  }
  return "?";
}

bool ratio_sweep_ok(std::span<const double> ratios, double slack) {
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] > std::max(ratios[i - 1], 0.0) * (1.0 + slack) + 1e-12) return false;
  return true;
}

namespace {

CertRow skipped_row(int n, double x, std::string reason) {
  CertRow row;
  row.n = n;
  row.x = x;
  row.observed = kNaN;
  row.bound = kNaN;
  row.margin = kNaN;
  row.ratio = kNaN;
  row.skipped = true;
  row.reason = std::move(reason);
  return row;
}

double grid_max(std::span<const double> xs) {
  double m = 0.0;
  for (double v : xs) m = std::max(m, v);
  return m;
}

}  // namespace

BoundCertificate certify_theorem_3_1(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid) {
  p.validate();
  BoundCertificate cert;
  cert.theorem_id = TheoremId::T3_1;
  cert.params = p;
  const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
  const double xmax = grid_max(x_grid);
  bool any = false, all = true;
  for (const double x : x_grid) {
    if (x < xmin) {
      cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
      continue;
    }
    const double obs = std::abs(apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap) - f(x));
    const double delta = kantorovich_delta(x, p);
    const Interval dom{0.0, f.analytic_modulus
                                ? f.domain_hi
                                : std::min(f.domain_hi, xmax + 4.0 * delta + 1.0)};
    const double omega = modulus_estimate(f, delta, dom, delta / 8.0).value;
    CertRow row;
    row.n = p.n;
    row.x = x;
    row.observed = obs;
    row.bound = 2.0 * omega;
    row.margin = row.bound - obs;
    row.ratio = kNaN;
    row.point_passed = row.margin >= -1e-12;
    cert.rows.push_back(row);
    any = true;
    all = all && row.point_passed;
  }
  cert.passed = any && all;
  cert.notes = f.analytic_modulus ? "modulus: analytic envelope"
                                  : "modulus: grid lower estimate";
  return cert;
}

BoundCertificate certify_remark(const OperatorParams& p,
                                std::span<const double> x_grid) {
  p.validate();
  BoundCertificate cert;
  cert.theorem_id = TheoremId::RemarkCompare;
  cert.params = p;
  const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
  const double c = 1.0 / (p.a - 1.0);
  bool any = false, all = true;
  for (const double x : x_grid) {
    if (x < xmin) {
      cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
      continue;
    }
    CertRow row;
    row.n = p.n;
    row.x = x;
    row.observed = kantorovich_delta(x, p);
    row.bound = std::sqrt(x * (1.0 + c) / p.n + 10.0 / (3.0 * static_cast<double>(p.n) * p.n));
    row.margin = row.bound - row.observed;
    row.ratio = kNaN;
    row.point_passed = row.margin > 0.0; // strict
    cert.rows.push_back(row);
    any = true;
    all = all && row.point_passed;
  }
  cert.passed = any && all;
  cert.notes = "strict comparison of the two closed-form deltas";
  return cert;
}

BoundCertificate certify_theorem_3_2(const TestFunction& f,
                                     const TestFunction& fprime,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid) {
  p.validate();
  BoundCertificate cert;
  cert.theorem_id = TheoremId::T3_2;
  cert.params = p;
  const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
  const double xmax = grid_max(x_grid);
  const double nb = p.n_plus_beta();
  const double delta_n = 1.0 / nb;
  const Interval dom{0.0, fprime.analytic_modulus
                              ? fprime.domain_hi
                              : std::min(fprime.domain_hi, xmax + 2.0)};
  const double w1 = modulus_estimate(fprime, delta_n, dom, delta_n / 8.0).value;
  bool any = false, all = true;
  if (w1 == 0.0) {
    // Affine boundary case: the bound formula vanishes while the error does
    // not; check the exact first-moment identity K f - f = f' * K(t - x; x).
    for (const double x : x_grid) {
      if (x < xmin) {
        cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
        continue;
      }
      const double obs = std::abs(apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap) - f(x));
      const double drift = std::abs(fprime(x)) * std::abs(central_moment_closed(1, x, p));
      CertRow row;
      row.n = p.n;
      row.x = x;
      row.observed = obs;
      row.bound = drift;
      row.margin = drift - obs;
      row.ratio = kNaN;
      row.point_passed = std::abs(obs - drift) <= 1e-10;
      cert.rows.push_back(row);
      any = true;
      all = all && row.point_passed;
    }
    cert.passed = any && all;
    cert.notes = "omega1 = 0 boundary case: exact first-moment comparison";
    return cert;
  }
  for (const double x : x_grid) {
    if (x < xmin) {
      cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
      continue;
    }
    const double obs = std::abs(apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap) - f(x));
    const double dk = kantorovich_delta(x, p);
    CertRow row;
    row.n = p.n;
    row.x = x;
    row.observed = obs;
    row.bound = w1 * dk * (1.0 + std::sqrt(nb) * dk);
    row.margin = row.bound - obs;
    row.ratio = kNaN;
    row.point_passed = row.margin >= -1e-12;
    cert.rows.push_back(row);
    any = true;
    all = all && row.point_passed;
  }
  cert.passed = any && all;
  cert.notes =
      "bound covers the omega1 term only; the first-moment drift can dominate "
      "for large n";
  return cert;
}

double korovkin_rho_norm(int i, const OperatorParams& p,
                         std::span<const double> x_grid) {
  if (i < 0 || i > 2) throw invalid_parameter("korovkin_rho_norm: requires i in 0..2");
  p.validate();
  const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
  double best = 0.0;
  for (const double x : x_grid) {
    if (x < xmin) throw out_of_domain("korovkin_rho_norm: grid point below operator domain");
    if (i == 1)
      best = std::max(best, std::abs(central_moment_closed(1, x, p)) / (1.0 + x * x));
  }
  return (i == 1) ? best : 0.0;
}

BoundCertificate certify_theorem_4_1(const TestFunction& f,
                                     std::span<const OperatorParams> p_list,
                                     double lambda,
                                     std::span<const double> x_grid,
                                     double slack) {
  if (p_list.empty()) throw invalid_parameter("certify_theorem_4_1: empty parameter list");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw invalid_parameter("certify_theorem_4_1: requires 0 <= lambda <= 1");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    p_list[i].validate();
    if (i > 0 && !(p_list[i].n > p_list[i - 1].n &&
                   p_list[i].a == p_list[0].a &&
                   p_list[i].alpha == p_list[0].alpha &&
                   p_list[i].beta == p_list[0].beta))
      throw invalid_parameter("certify_theorem_4_1: list must share a, alpha, beta and ascend in n");
  }
  BoundCertificate cert;
  cert.theorem_id = TheoremId::T4_1;
  cert.params = p_list.front();
  const double xmax = grid_max(x_grid);
  const Interval dom{0.0, std::min(f.domain_hi, xmax + 2.0)};
  const double step = dom.width() / 512.0;
  std::vector<double> ratios;
  bool guard_ok = true, any = false;
  for (const OperatorParams& p : p_list) {
    const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
    double maxr = 0.0;
    for (const double x : x_grid) {
      if (x < xmin) {
        cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
        continue;
      }
      const double obs = std::abs(apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap) - f(x));
      const double delta = std::pow(x, 0.5 * (1.0 - lambda)) / std::sqrt(p.n_plus_beta());
      const double mod = dt_modulus_estimate(f, delta, lambda, dom, step).value;
      CertRow row;
      row.n = p.n;
      row.x = x;
      row.observed = obs;
      row.bound = mod;
      row.margin = mod - obs;
      if (mod < 1e-300) {
        row.ratio = (obs <= 1e-12) ? 0.0 : kInf;
        if (obs > 1e-12) {
          guard_ok = false;
          row.point_passed = false;
          row.reason = "zero modulus with nonzero error";
        }
      } else {
        row.ratio = obs / mod;
      }
      maxr = std::max(maxr, row.ratio);
      cert.rows.push_back(row);
      any = true;
    }
    ratios.push_back(maxr);
  }
  cert.passed = any && guard_ok && ratio_sweep_ok(ratios, slack);
  cert.notes = "ratio certificate: per-n max(observed/modulus) non-increasing within slack";
  return cert;
}

double auxiliary_operator(const TestFunction& f, double x,
                          const OperatorParams& p, const ApplyOptions& opt) {
  const double kf = apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap, opt);
  const double m1 = raw_moment_closed(1, x, p);
  return kf + f(x) - f(m1);
}

BoundCertificate certify_theorem_4_2(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid,
                                     std::span<const int> n_sweep,
                                     double slack) {
  p.validate();
  if (f.growth != Growth::Bounded)
    throw invalid_parameter("certify_theorem_4_2: requires a bounded function");
  std::vector<int> sweep(n_sweep.begin(), n_sweep.end());
  if (sweep.empty()) sweep = {p.n, 2 * p.n, 4 * p.n, 8 * p.n};
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i] <= sweep[i - 1])
      throw invalid_parameter("certify_theorem_4_2: n sweep must ascend");
  BoundCertificate cert;
  cert.theorem_id = TheoremId::T4_2;
  cert.params = p;
  const double xmax = grid_max(x_grid);
  const Interval dom{0.0, std::min(f.domain_hi, xmax + 2.0)};
  const double step2 = dom.width() / 512.0;
  std::vector<double> ratios;
  bool guard_ok = true, any = false;
  for (const int n : sweep) {
    OperatorParams pn = p;
    pn.n = n;
    const double xmin = domain_min_x(pn, CenterMapKind::KantorovichMap);
    double maxr = -kInf;
    bool have = false;
    for (const double x : x_grid) {
      if (x < xmin) {
        cert.rows.push_back(skipped_row(n, x, "x below operator domain"));
        continue;
      }
      const double obs = std::abs(apply_kantorovich(f, x, pn, CenterMapKind::KantorovichMap) - f(x));
      const double lam1 = central_moment_closed(1, x, pn); // signed, negative
      const double psi2 = central_moment_closed(2, x, pn);
      const double omega_term =
          modulus_estimate(f, std::abs(lam1), dom, std::abs(lam1) / 8.0).value;
      const double pi_val = psi2 + lam1 * lam1;
      const double w2 = second_modulus_estimate(f, std::sqrt(pi_val), dom, step2).value;
      const double num = obs - omega_term;
      CertRow row;
      row.n = n;
      row.x = x;
      row.observed = obs;
      row.bound = omega_term + w2;
      row.margin = row.bound - obs;
      if (w2 < 1e-300) {
        row.ratio = (num <= 1e-12) ? 0.0 : kInf;
        if (num > 1e-12) {
          guard_ok = false;
          row.point_passed = false;
          row.reason = "zero second modulus with uncovered error";
        }
      } else {
        row.ratio = num / w2;
      }
      maxr = std::max(maxr, row.ratio);
      have = true;
      cert.rows.push_back(row);
      any = true;
    }
    ratios.push_back(have ? maxr : 0.0);
  }
  cert.passed = any && guard_ok && ratio_sweep_ok(ratios, slack);
  cert.notes = "ratio certificate: per-n max((observed - omega)/omega2) bounded within slack";
  return cert;
}

BoundCertificate certify_theorem_4_3(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid,
                                     double alpha_lip, double m_lip) {
  p.validate();
  if (!(alpha_lip > 0.0 && alpha_lip <= 1.0))
    throw invalid_parameter("certify_theorem_4_3: requires 0 < alpha <= 1");
  if (!(m_lip > 0.0)) throw invalid_parameter("certify_theorem_4_3: requires M > 0");

  // Membership check of the defining inequality on seeded random pairs.
  const double hi = std::min(f.domain_hi, grid_max(x_grid) + 1.0);
  std::mt19937_64 rng(0x5eed4c3ULL);
  std::uniform_real_distribution<double> uni(1e-6, hi);
  int checked = 0;
  for (int it = 0; it < 40000 && checked < 10000; ++it) {
    const double t = uni(rng);
    const double y = uni(rng);
    if (std::abs(t - y) < 1e-9) continue;
    ++checked;
    const double lhs = std::abs(f(t) - f(y)) * std::pow(t + y, 0.5 * alpha_lip);
    const double rhs = m_lip * std::pow(std::abs(t - y), alpha_lip);
    if (lhs > rhs + 1e-12)
      throw membership_violation("certify_theorem_4_3: function fails the Lip* inequality");
  }

  BoundCertificate cert;
  cert.theorem_id = TheoremId::T4_3;
  cert.params = p;
  const double xmin = domain_min_x(p, CenterMapKind::KantorovichMap);
  bool any = false, all = true;
  for (const double x : x_grid) {
    if (x < xmin) {
      cert.rows.push_back(skipped_row(p.n, x, "x below operator domain"));
      continue;
    }
    const double obs = std::abs(apply_kantorovich(f, x, p, CenterMapKind::KantorovichMap) - f(x));
    const double theta = central_moment_closed(2, x, p);
    CertRow row;
    row.n = p.n;
    row.x = x;
    row.observed = obs;
    row.bound = m_lip * std::pow(theta / x, 0.5 * alpha_lip);
    row.margin = row.bound - obs;
    row.ratio = kNaN;
    row.point_passed = row.margin >= -1e-12;
    cert.rows.push_back(row);
    any = true;
    all = all && row.point_passed;
  }
  cert.passed = any && all;
  cert.notes = "Lip* membership verified on 10000 seeded random pairs";
  return cert;
}

}  // namespace opk
