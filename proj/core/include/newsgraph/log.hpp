#pragma once

#include <string>

namespace newsgraph::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Silent = 4 };

void set_level(Level level);
Level level();

void debug(const std::string& msg);
void info(const std::string& msg);
void warn(const std::string& msg);
void error(const std::string& msg);

}  // namespace newsgraph::log
