#pragma once

namespace lrbox {

/// Entry point of the lrbox command line tool. Returns the process exit code:
/// 0 on success, 2 on configuration errors, 3 on numeric errors.
int run_cli(int argc, const char* const* argv);

}  // namespace lrbox
