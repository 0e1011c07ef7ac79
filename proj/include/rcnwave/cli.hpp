#pragma once

#include <ostream>

#include "rcnwave/errors.hpp"

namespace rcnwave {

// 0 ok, 1 usage or schema, 2 a mathematical condition failed, 3 numerical failure
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_condition = 2, exit_numerical = 3 };

int exit_code_for(ErrorCode c);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcnwave
