#include "colupi/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace colupi {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("COLUPI_LOG");
        if (env == nullptr) return LogLevel::error;
        const std::string value(env);
        if (value == "debug") return LogLevel::debug;
        if (value == "info") return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

namespace {

void emit(const char* tag, const std::string& msg) {
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

}  // namespace

void log_error(const std::string& msg) { emit("error", msg); }

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) emit("info", msg);
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) emit("debug", msg);
}

}  // namespace colupi
