#pragma once

namespace minigap::cli {

// Full command-line entry point: parses argv, dispatches the subcommand,
// writes the requested output.  Returns the process exit code: 0 on success,
// nonzero on any validation or runtime error.
int cli_main(int argc, char** argv);

}  // namespace minigap::cli
