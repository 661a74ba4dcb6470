#pragma once

#include <ostream>

namespace motprobe {

enum ExitCode : int {
    kExitOk = 0,
    kExitReportFailed = 1,
    kExitConfig = 2,
    kExitValidation = 3,
    kExitNumerical = 4,
    kExitIo = 5,
};

// motprobe <command> [--config PATH] [--seed N] [--no-noise] [--out DIR]
//                    [--scan-speed MM_PER_S] [--plots] [--background-subtract]
//                    [--input CSV --model NAME [--fixed-offset V] [--gate S]]
// Errors are reported as a single JSON line on err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace motprobe
