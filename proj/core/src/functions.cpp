#include "opk/functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "opk/errors.hpp"

namespace opk {

namespace {

double clamp_width(double delta, Interval iv) { return std::min(delta, iv.width()); }

// Largest admissible symmetric step inside the interval.
double clamp_half(double delta, Interval iv) { return std::min(delta, iv.width() / 2.0); }

std::vector<FunctionLibraryEntry> build_library() {
  std::vector<FunctionLibraryEntry> lib;
  const double pi = std::numbers::pi;

  {
    FunctionLibraryEntry e;
    e.id = "const";
    e.fn.evaluator = [](double) { return 1.0; };
    e.fn.growth = Growth::Bounded;
    e.fn.lipschitz_const = 0.0;
    e.fn.analytic_modulus = [](double, Interval) { return 0.0; };
    e.fn.analytic_second_modulus = [](double, Interval) { return 0.0; };
    TestFunction d;
    d.evaluator = [](double) { return 0.0; };
    d.growth = Growth::Bounded;
    d.analytic_modulus = [](double, Interval) { return 0.0; };
    e.derivative = d;
    lib.push_back(std::move(e));
  }
  {
    FunctionLibraryEntry e;
    e.id = "affine";
    e.fn.evaluator = [](double t) { return t; };
    e.fn.lipschitz_const = 1.0;
    e.fn.analytic_modulus = [](double delta, Interval iv) { return clamp_width(delta, iv); };
    e.fn.analytic_second_modulus = [](double, Interval) { return 0.0; };
    TestFunction d;
    d.evaluator = [](double) { return 1.0; };
    d.growth = Growth::Bounded;
    d.analytic_modulus = [](double, Interval) { return 0.0; };
    e.derivative = d;
    lib.push_back(std::move(e));
  }
  {
    FunctionLibraryEntry e;
    e.id = "square";
    e.fn.evaluator = [](double t) { return t * t; };
    e.fn.analytic_modulus = [](double delta, Interval iv) {
      if (!std::isfinite(iv.hi)) return std::numeric_limits<double>::infinity();
      const double w = clamp_width(delta, iv);
      return w * (2.0 * iv.hi - w);
    };
    e.fn.analytic_second_modulus = [](double delta, Interval iv) {
      const double h = clamp_half(delta, iv);
      return 2.0 * h * h;
    };
    TestFunction d;
    d.evaluator = [](double t) { return 2.0 * t; };
    d.analytic_modulus = [](double delta, Interval iv) { return 2.0 * clamp_width(delta, iv); };
    e.derivative = d;
    lib.push_back(std::move(e));
  }
  {
    FunctionLibraryEntry e;
    e.id = "exp-neg";
    e.fn.evaluator = [](double t) { return std::exp(-t); };
    e.fn.growth = Growth::Bounded;
    e.fn.lipschitz_const = 1.0;
    e.fn.analytic_modulus = [](double delta, Interval iv) {
      return std::exp(-iv.lo) * (-std::expm1(-clamp_width(delta, iv)));
    };
    e.fn.analytic_second_modulus = [](double delta, Interval iv) {
      const double s = -std::expm1(-clamp_half(delta, iv));
      return std::exp(-iv.lo) * s * s;
    };
    TestFunction d;
    d.evaluator = [](double t) { return -std::exp(-t); };
    d.growth = Growth::Bounded;
    d.analytic_modulus = [](double delta, Interval iv) {
      return std::exp(-iv.lo) * (-std::expm1(-clamp_width(delta, iv)));
    };
    e.derivative = d;
    lib.push_back(std::move(e));
  }
  {
    FunctionLibraryEntry e;
    e.id = "sin";
    e.fn.evaluator = [](double t) { return std::sin(t); };
    e.fn.growth = Growth::Bounded;
    e.fn.lipschitz_const = 1.0;
    e.fn.analytic_modulus = [pi](double delta, Interval iv) {
      const double w = std::min(clamp_width(delta, iv), pi);
      return 2.0 * std::sin(w / 2.0);
    };
    e.fn.analytic_second_modulus = [pi](double delta, Interval iv) {
      const double h = std::min(clamp_half(delta, iv), pi);
      const double s = std::sin(h / 2.0);
      return 4.0 * s * s;
    };
    TestFunction d;
    d.evaluator = [](double t) { return std::cos(t); };
    d.growth = Growth::Bounded;
    d.analytic_modulus = [pi](double delta, Interval iv) {
      const double w = std::min(clamp_width(delta, iv), pi);
      return 2.0 * std::sin(w / 2.0);
    };
    e.derivative = d;
    lib.push_back(std::move(e));
  }
  {
    // |t - 1|: Lipschitz-1 with a kink; no continuous derivative entry.
    FunctionLibraryEntry e;
    e.id = "abs";
    e.fn.evaluator = [](double t) { return std::abs(t - 1.0); };
    e.fn.lipschitz_const = 1.0;
    e.fn.analytic_modulus = [](double delta, Interval iv) { return clamp_width(delta, iv); };
    e.fn.analytic_second_modulus = [](double delta, Interval iv) {
      return 2.0 * clamp_half(delta, iv);
    };
    lib.push_back(std::move(e));
  }
  {
    // sqrt(t) with |f(t)-f(y)| = |t-y|/(sqrt t + sqrt y) <= |t-y|/sqrt(t+y),
    // so it belongs to Lip*_1(1).
    FunctionLibraryEntry e;
    e.id = "sqrt";
    e.fn.evaluator = [](double t) { return std::sqrt(t); };
    e.fn.analytic_modulus = [](double delta, Interval iv) {
      return std::sqrt(clamp_width(delta, iv));
    };
    e.fn.analytic_second_modulus = [](double delta, Interval iv) {
      return (2.0 - std::numbers::sqrt2) * std::sqrt(clamp_half(delta, iv));
    };
    e.lip_star = LipStarData{1.0, 1.0};
    lib.push_back(std::move(e));
  }
  return lib;
}

}  // namespace

const std::vector<FunctionLibraryEntry>& function_library() {
  static const std::vector<FunctionLibraryEntry> lib = build_library();
  return lib;
}

const FunctionLibraryEntry& find_function(std::string_view id) {
  for (const auto& e : function_library())
    if (e.id == id) return e;
  std::string known;
  for (const auto& e : function_library()) {
    if (!known.empty()) known += ", ";
    known += e.id;
  }
  throw config_error("unknown function id '" + std::string(id) + "' (known: " + known + ")");
}

}  // namespace opk
