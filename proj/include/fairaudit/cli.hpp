#pragma once

#include <string>
#include <vector>

namespace fairaudit {

// Entry point behind the fairaudit binary. Subcommands: generate,
// counterfactual, ftu-check, evaluate, autoeval, recommend-eval,
// classify-eval. Returns 0 on success, 1 for configuration errors
// (nothing written), 2 for runtime failures that voided every requested
// metric. Reports are written atomically as JSON plus a markdown twin.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace fairaudit
