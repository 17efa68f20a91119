#pragma once

#include <string>

namespace slspec::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Level comes from SLSPEC_LOG (error|warn|info|debug), default warn.
Level level();
void write(Level lvl, const std::string& msg);

inline void warn(const std::string& m) { write(Level::warn, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void debug(const std::string& m) { write(Level::debug, m); }

}  // namespace slspec::log
