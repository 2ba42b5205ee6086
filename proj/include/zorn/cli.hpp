#pragma once

#include <iosfwd>

namespace zorn {

/// Command-line entry point. Returns 0 on success, 1 when a goal check is
/// violated and 2 on a usage error.
int cli_main(int argc, char** argv);
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace zorn
