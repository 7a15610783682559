#pragma once

#include <iosfwd>

namespace odenorm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

/// Runs one odenorm invocation. Results go to `out`, one-line diagnostics to
/// `err`; the return value is the process exit status.
int main_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace odenorm
