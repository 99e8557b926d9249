#pragma once

// Minimal leveled logging to stderr; the level comes from HBEVENT_LOG
// (error, warn, info, debug; default warn).

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>

namespace hbevent::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level parse_level(std::string_view s) {
  if (s == "error") return Level::Error;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return Level::Warn;
}

inline Level& threshold() {
  static Level level = [] {
    const char* env = std::getenv("HBEVENT_LOG");
    return env ? parse_level(env) : Level::Warn;
  }();
  return level;
}

inline void set_level(Level l) { threshold() = l; }

inline void write(Level l, std::string_view tag, const std::string& msg) {
  if (static_cast<int>(l) > static_cast<int>(threshold())) return;
  static std::mutex m;
  std::lock_guard<std::mutex> lock(m);
  std::cerr << "[hbevent " << tag << "] " << msg << '\n';
}

inline void error(const std::string& msg) { write(Level::Error, "error", msg); }
inline void warn(const std::string& msg) { write(Level::Warn, "warn", msg); }
inline void info(const std::string& msg) { write(Level::Info, "info", msg); }
inline void debug(const std::string& msg) { write(Level::Debug, "debug", msg); }

}  // namespace hbevent::log
