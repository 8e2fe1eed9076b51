#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewr/types.hpp"

namespace ewr {

/// Process exit codes of the ewr tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitAssumption = 3,
  kExitPropertyFailure = 4,
  kExitPath = 5,
};

/// Raised by parse_config; carries the exit code to report.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

/// Everything a command can read. Fields a command does not use keep their
/// defaults and are left out of its provenance block.
struct RunConfig {
  std::string command;  // gen, reconstruct, bounds, figure1, check
  std::uint64_t seed = 1;
  std::string out;
  std::string data;

  // dataset
  Index n = 16, k = 3, m = 8, s = 2;
  std::optional<double> delta;  // gen/figure1 default 0.1; bounds/reconstruct default: the dataset's
  std::optional<double> c_in;
  std::optional<double> c_out;
  double noise = 0.0;
  std::string weights = "defocus";

  // network / reconstruction
  Index depth = 10;
  double tau_scale = 0.9;
  std::vector<double> taus;
  std::string reg = "none";
  double lambda = 0.0;
  std::string init = "spectral";
  std::string nonlinearity = "pseudo_huber";
  int iters = 500;
  bool lenient = false;
  double alpha = 0.05;

  // figure1
  Index l_max = 8;
  int grid = 64, refine = 20, inner = 50;
  std::uint64_t g_seed = 42;
  bool general_u2 = false;
  std::uint64_t search_seed = 7;

  // check
  long trials = 1000;
  bool inject_fault = false;
  std::vector<std::string> only, skip;
};

/// Parses `ewr <command> [flags]`. A `--config FILE` of key = value lines
/// (keys are the long flag names) supplies defaults; flags win; unknown
/// keys are errors. Throws CliError; `--help` throws with code 0 and the
/// help text as message.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes one command. Human-readable progress goes to `out`, errors to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config + run with every error mapped to its exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ewr
