#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pbclab {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,  // malformed JSON, bad flags, violated preconditions
  kBudgetExceeded = 3
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<double> tol_check;     // slack for inequality sweeps
  double tol_bound = 1e-12;            // exact error may exceed its bound by this much
  double tol_residual = 1e-9;          // divergence identity residuals
  double tol_region = 1e-12;           // region membership
  std::string output_path;             // empty: the output stream passed to run()
  std::string format = "json";         // json or csv
};

// Runs one pbclab invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbclab
