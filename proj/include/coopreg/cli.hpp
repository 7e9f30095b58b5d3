#pragma once

#include <ostream>

namespace coopreg {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // infeasible design or failed check
inline constexpr int kExitUsage = 2;   // usage, parse or pairing error

// Subcommands: check, synth, sim, demo, export. COOPREG_SEED overrides
// --seed where a seed is used.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coopreg
