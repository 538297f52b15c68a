#pragma once

#include <ostream>

namespace nodalkit {

// Entry point of the nodalkit command. Exit codes: 0 success, 1 failed check or
// numerical failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nodalkit
