#pragma once

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

namespace ecl::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

// Verbosity comes from the ECL_LOG environment variable: error|info|debug.
inline Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("ECL_LOG");
        if (env == nullptr) return Level::Info;
        const std::string_view v{env};
        if (v == "error") return Level::Error;
        if (v == "debug") return Level::Debug;
        return Level::Info;
    }();
    return lvl;
}

inline void emit(Level lvl, std::string_view tag, const std::string& msg) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[ecl " << tag << "] " << msg << '\n';
}

inline void error(const std::string& msg) { emit(Level::Error, "error", msg); }
inline void info(const std::string& msg) { emit(Level::Info, "info", msg); }
inline void debug(const std::string& msg) { emit(Level::Debug, "debug", msg); }

}  // namespace ecl::log
