#include "qsched/log.hpp"

#include <cstdlib>
#include <iostream>

namespace qsched {

LogLevel log_level() {
    static LogLevel level = [] {
        const char *env = std::getenv("QSCHED_LOG");
        if (env == nullptr) {
            return LogLevel::Error;
        }
        std::string value(env);
        if (value == "debug") {
            return LogLevel::Debug;
        }
        if (value == "info") {
            return LogLevel::Info;
        }
        return LogLevel::Error;
    }();
    return level;
}

bool log_enabled(LogLevel level) {
    return static_cast<int>(level) <= static_cast<int>(log_level());
}

void log(LogLevel level, const std::string &msg) {
    if (log_enabled(level)) {
        const char *tag = level == LogLevel::Error ? "error"
                          : level == LogLevel::Info ? "info"
                                                    : "debug";
        std::cerr << "[qsched:" << tag << "] " << msg << '\n';
    }
}

} // namespace qsched
