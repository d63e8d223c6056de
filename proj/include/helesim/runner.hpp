#pragma once

#include <iosfwd>
#include <string>

#include "helesim/config.hpp"

namespace helesim {

enum class Command { simulate, verify, oracle_compare, sweep };

Command command_from_name(const std::string& name);

/// Runs one subcommand to completion and returns the process exit status:
/// 0 success, 1 configuration error, 2 numerical breakdown, 3 check failure
/// (a monitored theorem violated at the discrete level), 4 I/O error.
/// Reports go to `log` and files under cfg.out_dir.
int execute(Command cmd, const RunConfig& cfg, std::ostream& log);

} // namespace helesim
