// opk: parameter sweeps, moment checks and error-bound certificates for the
// Charlier-weight Szasz / Kantorovich operator family.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "opk/errors.hpp"
#include "opk/sweep.hpp"

namespace {

struct RawArgs {
  std::string fn, n, a, ab, x, theorem, lambda, tail_tol, tol, slack, map, format, out, config;
};

void add_common(CLI::App* cmd, RawArgs& raw) {
  cmd->add_option("--fn", raw.fn, "test function id (const, affine, square, exp-neg, sin, abs, sqrt)");
  cmd->add_option("--n", raw.n, "comma list of operator indices, e.g. 10,100");
  cmd->add_option("--a", raw.a, "comma list of a parameters (each > 1)");
  cmd->add_option("--ab", raw.ab, "semicolon list of alpha,beta pairs, e.g. \"0,0;1,2\"");
  cmd->add_option("--x", raw.x, "evaluation grid lo:hi:count");
  cmd->add_option("--theorem", raw.theorem, "certificate id: 3.1, 3.2, 3.3, remark, 4.1, 4.2, 4.3");
  cmd->add_option("--lambda", raw.lambda, "Ditzian-Totik lambda in [0,1] (theorem 4.1)");
  cmd->add_option("--tail-tol", raw.tail_tol, "weight-series tail tolerance (default 1e-14)");
  cmd->add_option("--tol", raw.tol, "moment discrepancy gate (default 1e-9)");
  cmd->add_option("--slack", raw.slack, "ratio-certificate slack (default 0.1)");
  cmd->add_option("--map", raw.map, "center map: identity, szasz, kantorovich");
  cmd->add_option("--format", raw.format, "output format: csv (default) or json");
  cmd->add_option("--out", raw.out, "output path (default stdout)");
  cmd->add_option("--config", raw.config, "key=value config file; flags override");
}

// Collect the flag values present on the parsed subcommand.
std::map<std::string, std::string> cli_kv(const CLI::App* sub, const RawArgs& raw) {
  std::map<std::string, std::string> kv;
  const std::pair<const char*, const std::string*> flags[] = {
      {"--fn", &raw.fn},       {"--n", &raw.n},           {"--a", &raw.a},
      {"--ab", &raw.ab},       {"--x", &raw.x},           {"--theorem", &raw.theorem},
      {"--lambda", &raw.lambda}, {"--tail-tol", &raw.tail_tol}, {"--tol", &raw.tol},
      {"--slack", &raw.slack}, {"--map", &raw.map},       {"--format", &raw.format},
      {"--out", &raw.out}};
  for (const auto& [flag, value] : flags)
    if (sub->count(flag) > 0) kv[std::string(flag).substr(2)] = *value;
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive linear operator toolkit (Charlier-weight Szasz/Kantorovich family)"};
  app.require_subcommand(1);
  RawArgs raw;
  const char* names[] = {"weights", "moments", "certify", "converge", "compare"};
  const char* descs[] = {"dump the operator weight series",
                         "closed-form vs series moments",
                         "run a theorem certificate",
                         "convergence sweep over n",
                         "side-by-side operator comparison"};
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], descs[i]), raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    opk::SweepConfig cfg;
    cfg.command = opk::parse_command(sub->get_name());
    if (sub->count("--config") > 0)
      for (const auto& [k, v] : opk::load_config_file(raw.config)) opk::apply_kv(cfg, k, v);
    for (const auto& [k, v] : cli_kv(sub, raw)) opk::apply_kv(cfg, k, v);

    const opk::Report rep = opk::run(cfg);
    const std::string text = opk::serialize(rep, cfg);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out, std::ios::binary);
      if (!out) throw opk::config_error("cannot open output file '" + cfg.out + "'");
      out << text;
    }
    return rep.exit_status;
  } catch (const opk::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const opk::invalid_parameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
