#pragma once

#include <iosfwd>

namespace gmshadow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point of the gmshadow command line (run, classify, spectrum, sweep, presets).
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmshadow
