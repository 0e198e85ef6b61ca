#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdg
{

/// Process exit codes of the command-line tool.
enum ExitCode : int
{
    kExitOk = 0,
    kExitValidation = 1,
    kExitUsage = 2,
    kExitIo = 3,
};

/// Entry point behind the `pdg` executable. `args` includes the program
/// name, as in argv.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pdg
