#pragma once

#include <string>

namespace colupi {

// Verbosity comes from the COLUPI_LOG environment variable:
// "error" (default), "info" or "debug".
enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace colupi
