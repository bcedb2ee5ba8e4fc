#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dropsvm::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kConfigError = 2 };

/// Runs one command. `args` excludes the program name, e.g.
/// {"train", "--data", "a.svm", "--out", "m.txt"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `key=value` lines ('#' comments, blank lines allowed). Keys are
/// flag names without the leading dashes.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Inserts `--key=value` for every config entry whose flag is not already
/// present in `args`, right after the subcommand name.
std::vector<std::string> merge_config(std::vector<std::string> args,
                                      const std::map<std::string, std::string>& config);

}  // namespace dropsvm::cli
