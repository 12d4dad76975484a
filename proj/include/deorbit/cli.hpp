#pragma once

// Operator command line. Exit status: 0 success, 1 data or I/O error, 2 usage error.
// Numbers on standard output use fixed six-decimal formatting so repeated runs
// are byte-identical.

#include <iosfwd>
#include <string>

namespace deorbit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "%.6f", with negative zero printed as zero.
std::string fixed6(double v);

}  // namespace deorbit::cli
