#pragma once

#include <ostream>

namespace mixkde::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failed = 1;
inline constexpr int exit_usage = 2;

//! Entry point of the `mixkde` tool. Subcommands: kernel-build,
//! kernel-verify, rate, family-build, family-verify, risk-run.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mixkde::cli
