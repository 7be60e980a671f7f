#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "randwidth/samplers.hpp"

namespace randwidth {

enum class Command {
  sample,
  width,
  orlicz,
  sweep,
  concentrate,
  lipschitz,
  tailprobe,
  inclusion,
  bound
};

Command command_from_string(const std::string& s);
std::string to_string(Command c);

/// Thrown for malformed invocations; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fully resolved run description. Flags override config-file values; the
/// seed is always explicit (no entropy-source default).
struct RunConfig {
  Command command = Command::sweep;
  IsotropicFamily model = IsotropicFamily::gaussian;
  LawKind law = LawKind::fixed;
  double p = 2.0;
  int n = 8;
  std::vector<int> N_grid = {64};
  int R = 64;
  int M = 1024;
  int y_draws = 1;
  int draws = 200;
  int samples = 100000;
  int trials = 20;
  int pairs = 10;
  std::vector<double> alpha = {0.5};
  std::vector<double> t_grid;  // defaulted in parse_config
  std::vector<double> y;       // empty means all-ones
  double c1 = 0.5;
  double c2 = 1.0;
  bool strict = false;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out = "run";

  bool operator==(const RunConfig&) const = default;

  PerturbationLaw perturbation_law(int N) const;
  IsotropicModel isotropic_model() const { return {model, n}; }
};

/// Parses `command --key value ...` plus optional flat key=value config
/// text (flags win). Unknown keys, malformed numbers and invalid enum
/// values raise UsageError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args, const std::string& config_text = "");

/// Canonical key=value echo of a config; parse_config({}, echo) returns an
/// equal RunConfig.
std::string config_echo_text(const RunConfig& cfg);

struct ExecResult {
  int exit_code = 0;
  std::vector<std::string> files;
};

/// Runs the command, writing <out>.csv and <out>.manifest.json.
/// Exit codes: 0 ok, 3 numeric/regime/IO failure. Byte-identical CSV for
/// equal configs regardless of the worker count.
ExecResult execute(const RunConfig& cfg);

/// Full front end: argv parsing (plus $RANDWIDTH_CONFIG), dispatch, error
/// reporting. Returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace randwidth
