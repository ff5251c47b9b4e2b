#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opk/moments.hpp"
#include "opk/operators.hpp"

namespace opk {

enum class ModulusKind { Omega, Omega1, Omega2, DitzianTotik };

struct ModulusEstimate {
  ModulusKind kind = ModulusKind::Omega;
  double lambda = 0.0;  // meaningful for DitzianTotik only
  double delta = 0.0;
  double value = 0.0;
  double grid_step = 0.0;        // 0 when the value came from an analytic envelope
  bool is_lower_estimate = false;
};

/// Grid supremum of |f(t) - f(y)| over pairs with |t - y| <= delta.
/// Uses the analytic envelope instead when the function carries one
/// (exact, is_lower_estimate = false).  Requires step <= delta / 8.
ModulusEstimate modulus_estimate(const TestFunction& f, double delta,
                                 Interval domain, double step);

/// Symmetric second-difference supremum sup_{0<h<=delta} |f(y-h)-2f(y)+f(y+h)|.
ModulusEstimate second_modulus_estimate(const TestFunction& f, double delta,
                                        Interval domain, double step);

/// Ditzian-Totik modulus with step h * phi(x)^lambda, phi(x) = sqrt(x);
/// only x with x - h phi^lambda(x) >= 0 contribute.  lambda = 0 coincides
/// exactly with second_modulus_estimate on identical grids.
ModulusEstimate dt_modulus_estimate(const TestFunction& f, double delta,
                                    double lambda, Interval domain,
                                    double step);

enum class TheoremId { T3_1, T3_2, T4_1, T4_2, T4_3, RemarkCompare, Korovkin3_3 };
std::string_view theorem_name(TheoremId id);

struct CertRow {
  int n = 0;
  double x = 0.0;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0; // bound - observed
  double ratio = 0.0;  // NaN unless the certificate is ratio-based
  bool point_passed = true;
  bool skipped = false;
  std::string reason;
};

struct BoundCertificate {
  TheoremId theorem_id = TheoremId::T3_1;
  OperatorParams params;
  std::vector<CertRow> rows;
  bool passed = false;
  std::string notes;
};

/// |K(f;x) - f(x)| <= 2 omega(f; delta) with delta = sqrt(K((t-x)^2; x)).
BoundCertificate certify_theorem_3_1(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid);

/// Strict comparison delta_{n,a}^{alpha,beta} < sqrt(x(1+1/(a-1))/n + 10/(3n^2)).
BoundCertificate certify_remark(const OperatorParams& p,
                                std::span<const double> x_grid);

/// First-derivative estimate: bound = omega1((n+beta)^{-1}) sqrt(psi2)
/// (1 + sqrt(n+beta) sqrt(psi2)).  omega1 == 0 (affine f) is handled as a
/// boundary case via the exact first-moment comparison.
BoundCertificate certify_theorem_3_2(const TestFunction& f,
                                     const TestFunction& fprime,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid);

/// Grid supremum of |K(e_i;x) - x^i| / (1 + x^2); exactly 0 for i = 0, 2.
double korovkin_rho_norm(int i, const OperatorParams& p,
                         std::span<const double> x_grid);

/// Ratio certificate: max over the grid of observed / dt-modulus must be
/// non-increasing along the (ascending-n) parameter list within the slack.
BoundCertificate certify_theorem_4_1(const TestFunction& f,
                                     std::span<const OperatorParams> p_list,
                                     double lambda,
                                     std::span<const double> x_grid,
                                     double slack = 0.1);

/// K(f;x) + f(x) - f(K(t;x)); reproduces constants and annihilates t - x.
double auxiliary_operator(const TestFunction& f, double x,
                          const OperatorParams& p, const ApplyOptions& opt = {});

/// Ratio certificate for the second-order estimate: the grid maximum of
/// (observed - omega(f;|Lambda|)) / omega2(f; sqrt(Pi)) must stay bounded
/// along an increasing-n sweep (default {n, 2n, 4n, 8n}).
BoundCertificate certify_theorem_4_2(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid,
                                     std::span<const int> n_sweep = {},
                                     double slack = 0.1);

/// Lipschitz-class estimate |K(f;x)-f(x)| <= M (Theta/x)^{alpha/2} with
/// Theta = K((t-x)^2; x).  Membership in the class is checked first on
/// 10^4 seeded random pairs; a violation throws membership_violation.
BoundCertificate certify_theorem_4_3(const TestFunction& f,
                                     const OperatorParams& p,
                                     std::span<const double> x_grid,
                                     double alpha_lip, double m_lip);

/// r_{i+1} <= max(r_i, 0) (1 + slack) + 1e-12 for all consecutive pairs.
bool ratio_sweep_ok(std::span<const double> ratios, double slack);

}  // namespace opk
