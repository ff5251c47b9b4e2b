#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opk/operators.hpp"
#include "opk/report.hpp"

namespace opk {

enum class Command { Weights, Moments, Certify, Converge, Compare };
enum class OutputFormat { Csv, Json };

struct GridSpec {
  double lo = 0.5;
  double hi = 5.0;
  long long count = 10;
  std::vector<double> points() const; // inclusive endpoints, uniform spacing
};

struct SweepConfig {
  Command command = Command::Moments;
  std::string function_id;                             // --fn
  std::vector<int> n_list{10};                         // --n
  std::vector<double> a_list{2.0};                     // --a
  std::vector<std::pair<double, double>> ab_pairs{{0.0, 0.0}}; // --ab
  GridSpec x_grid{};                                   // --x lo:hi:count
  std::string theorem_id;                              // --theorem (certify)
  std::optional<double> lambda{};                      // --lambda (theorem 4.1)
  double tail_tol = 1e-14;                             // --tail-tol
  double tol = 1e-9;                                   // --tol (moments gate)
  double slack = 0.1;                                  // --slack (ratio certificates)
  std::optional<CenterMapKind> map{};                  // --map (weights, compare)
  std::string out;                                     // --out ("" = stdout)
  OutputFormat format = OutputFormat::Csv;             // --format
};

// Flag/config parsing helpers; all throw config_error on malformed input.
std::vector<int> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s);
std::vector<std::pair<double, double>> parse_ab_pairs(const std::string& s);
GridSpec parse_grid(const std::string& s);
CenterMapKind parse_map(const std::string& s);
OutputFormat parse_format(const std::string& s);
Command parse_command(const std::string& s);

/// key=value lines, '#' comments; unknown keys are rejected at apply time.
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Applies one key=value setting (keys are the long flag names without "--").
void apply_kv(SweepConfig& cfg, const std::string& key, const std::string& value);

/// Cross-field validation; throws config_error.
void validate(const SweepConfig& cfg);

Report run_weights(const SweepConfig& cfg);
Report run_moments(const SweepConfig& cfg);
Report run_certify(const SweepConfig& cfg);
Report run_converge(const SweepConfig& cfg);
Report run_compare(const SweepConfig& cfg);

/// Validates and dispatches on cfg.command.
Report run(const SweepConfig& cfg);

/// Serializes per cfg.format and writes to cfg.out (or returns via stdout
/// string when cfg.out is empty).
std::string serialize(const Report& rep, const SweepConfig& cfg);

}  // namespace opk
