#pragma once

#include <ostream>

namespace hwmat::cli {

/// Runs the command line. Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hwmat::cli
