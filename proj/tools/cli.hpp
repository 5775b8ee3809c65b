#pragma once

#include <iosfwd>

namespace bppr::cli {

// Runs one command line. Reports go to `out`, errors to `err` as a single
// line "error: code=N message=...". Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bppr::cli
