#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace evitherm::cli {

// Entry point shared by the binary and the tests. args excludes the
// program name. Records and tables go to `out` unless --out redirects
// them to a file; diagnostics go to `err`. Returns the process exit code:
// 0 on success, 1 on invalid input, computation failure, or failed audit.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Doubles rendered with 12 significant digits, locale-free; integral
// values come out without a trailing ".0". Shared by every CSV emitter so
// output bytes are reproducible.
std::string format_number(double v);

}  // namespace evitherm::cli
