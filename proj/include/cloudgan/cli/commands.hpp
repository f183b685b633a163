#pragma once

namespace cloudgan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitIo = 5;

/// Parses argv, runs one subcommand and maps failures to exit codes.
int cli_dispatch(int argc, char** argv);

}  // namespace cloudgan::cli
