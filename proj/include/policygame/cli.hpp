#pragma once

#include <iosfwd>

namespace policygame {

// Exit status: 0 success, 1 invalid input or arguments, 2 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace policygame
