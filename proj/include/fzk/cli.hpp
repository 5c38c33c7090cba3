#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fzk {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitNumerical = 2,
};

/// Batch entry point. `args` excludes the program name. Subcommands:
///
///   run <config>
///   converge <config> --ns 16,32,64,128
///   temporal-order <config> --dts 0.025,0.0125,...
///   solitons <config> [--full] [--alphas 1.2,1.5,1.9,2.0]
///   oracle-check [--nmax 8] [--trials 100] [--seed S]
///
/// Human-readable summaries go to `out`, diagnostics to `err`, artifacts to
/// the config's out_dir.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv);

}  // namespace fzk
