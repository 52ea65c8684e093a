#pragma once

#include <ostream>

namespace sab_cli {

// The whole command line; returns the process exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sab_cli
