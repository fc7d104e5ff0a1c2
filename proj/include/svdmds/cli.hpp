#pragma once

#include <iosfwd>

namespace svdmds {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

/// Entry point of the `svdmds` tool. Subcommands: complete, localize, sweep,
/// packing, bounds. Returns 0 on success, 1 on usage or input errors and 2
/// on numeric failure; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

}  // namespace svdmds
