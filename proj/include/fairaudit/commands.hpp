#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fairaudit {

/// Exit codes shared by every verb.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;
inline constexpr int kExitConfig = 2;

/// Runs `fairaudit <verb> [flags]`. `args` excludes the program name.
/// Diagnostics go to `err`, summaries to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairaudit
