#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace iaware::logging {

enum class Level { quiet = 0, info = 1, debug = 2 };

/// Verbosity from the IAWARE_LOG environment variable ("info" or "debug";
/// anything else is quiet). Read once.
inline Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("IAWARE_LOG");
        if (env == nullptr) return Level::quiet;
        const std::string v(env);
        if (v == "debug") return Level::debug;
        if (v == "info") return Level::info;
        return Level::quiet;
    }();
    return lvl;
}

inline void info(const std::string& message) {
    if (level() >= Level::info) std::cerr << "[iaware] " << message << '\n';
}

inline void debug(const std::string& message) {
    if (level() >= Level::debug) std::cerr << "[iaware] " << message << '\n';
}

}  // namespace iaware::logging
