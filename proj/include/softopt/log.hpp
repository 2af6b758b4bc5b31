#pragma once

#include <string>

namespace softopt {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

/// Read once from SOFTOPT_LOG_LEVEL (error|warn|info|debug); default info.
LogLevel log_level();
void set_log_level(LogLevel level);
void log(LogLevel level, const std::string& message);

}  // namespace softopt
