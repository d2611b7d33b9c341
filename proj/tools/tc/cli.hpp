#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tc {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kBudget = 3, kVerifyFailed = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tc
