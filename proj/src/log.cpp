#include "slspec/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace slspec::log {

Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("SLSPEC_LOG");
    if (!env) return Level::warn;
    std::string s(env);
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
  }();
  return lvl;
}

void write(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  static std::mutex mu;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "[slspec " << names[static_cast<int>(lvl)] << "] " << msg << '\n';
}

}  // namespace slspec::log
