#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamcov {

/// Exit codes: 0 success, 1 an acceptance gate failed, 2 usage or input error.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same as above with argv[0] implied; convenient for tests.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamcov
