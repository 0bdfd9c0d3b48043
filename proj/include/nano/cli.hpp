#pragma once

#include <ostream>

namespace nano {

// Entry point of the nano_bench tool. Returns 0 on success, 2 on a usage or
// configuration error and 1 on a runtime failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nano
