#ifndef TORUSREL_CLI_HPP
#define TORUSREL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace torusrel {

// Runs the command line tool. Arguments exclude the program name.
// Returns the process exit code; all output goes to the given streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace torusrel

#endif
