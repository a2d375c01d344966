#pragma once

#include <ostream>

namespace phasetraffic::cli {

// exit codes: 0 ok, 1 runtime failure (or failed analysis checks), 2 usage/config error
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasetraffic::cli
