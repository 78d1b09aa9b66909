#pragma once

#include "varta/estimation.hpp"

#include <string>
#include <vector>

namespace varta {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitData = 3, kExitNumerical = 4 };

/// Parameter table grouped into multivariate relationships and marginal parameters.
[[nodiscard]] std::string format_fit_table(const FitResult& fr, const std::vector<std::string>& names);

/// Entry point for the `varta` executable (simulate | fit | forecast | diagnose | mc).
int run_cli(int argc, char** argv);

}  // namespace varta
