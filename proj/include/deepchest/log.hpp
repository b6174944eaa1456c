#ifndef DEEPCHEST_LOG_HPP
#define DEEPCHEST_LOG_HPP

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace deepchest {

/// Diagnostics go to stderr so stdout and output files stay machine-clean.
/// DEEPCHEST_LOG=debug|info|warn selects the level; default warn.
enum class LogLevel { debug = 0, info = 1, warn = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("DEEPCHEST_LOG");
        if (env && std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (env && std::strcmp(env, "info") == 0) return LogLevel::info;
        return LogLevel::warn;
    }();
    return level;
}

inline void log_at(LogLevel level, const char* tag, const char* fmt, std::va_list args) {
    if (level < log_level()) return;
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

inline void log_debug(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    log_at(LogLevel::debug, "debug", fmt, args);
    va_end(args);
}

inline void log_info(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    log_at(LogLevel::info, "info", fmt, args);
    va_end(args);
}

inline void log_warn(const char* fmt, ...) {
    std::va_list args;
    va_start(args, fmt);
    log_at(LogLevel::warn, "warn", fmt, args);
    va_end(args);
}

} // namespace deepchest

#endif
