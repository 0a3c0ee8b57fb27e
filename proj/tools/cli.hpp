// Command-line front end; main() only forwards here so tests can drive it.
#pragma once

#include <ostream>

namespace meixner::cli {

// Exit codes: 0 ok, 1 a verification failed, 2 configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meixner::cli
