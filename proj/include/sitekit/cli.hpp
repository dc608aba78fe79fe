#ifndef SITEKIT_CLI_HPP_
#define SITEKIT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace sitekit {

// Full command-line driver.  Returns the process exit code: 0 success,
// 1 property-check failure, 2 input or usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace sitekit

#endif  // SITEKIT_CLI_HPP_
