#pragma once

#include <string>
#include <vector>

#include "mtbl/config.h"

namespace mtbl {

// One CLI invocation, arguments given without the program name. Returns the
// process exit code: 0 success, 2 usage or config error, 3 data error.
int run_cli(const std::vector<std::string>& args);

// Subcommand bodies; throw ConfigError / DataError instead of exiting.
void cmd_train(const RunConfig& config);
void cmd_apply(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_analyze(const RunConfig& config);
void cmd_synth(const RunConfig& config);

}  // namespace mtbl
