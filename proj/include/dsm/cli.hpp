#ifndef DSM_CLI_HPP
#define DSM_CLI_HPP

#include <iosfwd>

namespace dsm {

// Exit codes: 0 success, 1 data or computation error, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dsm

#endif // DSM_CLI_HPP
