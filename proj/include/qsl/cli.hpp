#pragma once

namespace qsl {

// Entry point for the qslkit command-line tool.  Returns the process exit
// code: 0 success, 1 invalid input, 2 verification failure, 3 numerical
// failure (a quadrature that never stabilized, or an I/O fault mid-run).
int run_cli(int argc, const char* const* argv);

}  // namespace qsl
