#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace panos::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level comes from PANOS_LOG_LEVEL in {error,warn,info,debug}; default warn.
inline Level threshold() {
  static Level lvl = [] {
    const char* env = std::getenv("PANOS_LOG_LEVEL");
    if (!env) return Level::Warn;
    if (std::strcmp(env, "error") == 0) return Level::Error;
    if (std::strcmp(env, "warn") == 0) return Level::Warn;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    return Level::Warn;
  }();
  return lvl;
}

inline void emit(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(threshold())) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(lvl)], msg.c_str());
}

inline void error(const std::string& m) { emit(Level::Error, m); }
inline void warn(const std::string& m) { emit(Level::Warn, m); }
inline void info(const std::string& m) { emit(Level::Info, m); }
inline void debug(const std::string& m) { emit(Level::Debug, m); }

}  // namespace panos::log
