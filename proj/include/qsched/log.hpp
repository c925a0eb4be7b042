/** \file
 * Minimal stderr logging controlled by the QSCHED_LOG environment variable
 * (error | info | debug; default error).
 */
#pragma once

#include <string>

namespace qsched {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level();
bool log_enabled(LogLevel level);
void log(LogLevel level, const std::string &msg);

} // namespace qsched
