#pragma once

#include <iosfwd>

namespace fdpc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;       // bad configuration or failed solve
inline constexpr int kUnstable = 2;    // distributed loop reported instability
inline constexpr int kNotConverged = 3;  // iteration budget exhausted / checks failed

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdpc::cli
