#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace wattmark::orchestrator {

/// Substitutes {name} placeholders. Values containing shell metacharacters
/// are single-quoted. Unknown or unterminated placeholders throw ConfigError.
std::string expand_command(const std::string& command_template,
                           const std::map<std::string, std::string>& values);

/// Runs `command` through /bin/sh -c with stdout and stderr appended to
/// `log_path`, and blocks until it exits. Returns the exit status, or
/// 128 + signal number when the process was killed by a signal.
int run_shell_command(const std::string& command, const std::filesystem::path& log_path);

}  // namespace wattmark::orchestrator
