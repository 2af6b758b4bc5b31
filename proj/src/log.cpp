#include "softopt/log.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace softopt {

namespace {

LogLevel from_env() {
  const char* v = std::getenv("SOFTOPT_LOG_LEVEL");
  if (!v) return LogLevel::info;
  if (!std::strcmp(v, "error")) return LogLevel::error;
  if (!std::strcmp(v, "warn")) return LogLevel::warn;
  if (!std::strcmp(v, "debug")) return LogLevel::debug;
  return LogLevel::info;
}

std::atomic<int>& level_store() {
  static std::atomic<int> level{static_cast<int>(from_env())};
  return level;
}

const char* tag(LogLevel l) {
  switch (l) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "";
}

}  // namespace

LogLevel log_level() { return static_cast<LogLevel>(level_store().load()); }

void set_log_level(LogLevel level) { level_store().store(static_cast<int>(level)); }

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > level_store().load()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[softopt " << tag(level) << "] " << message << '\n';
}

}  // namespace softopt
