#include "newsgraph/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace newsgraph::log {

namespace {
std::atomic<Level> g_level{Level::Info};
std::mutex g_mutex;

void emit(Level lvl, const char* tag, const std::string& msg) {
  if (lvl < g_level.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << tag << msg << '\n';
}
}  // namespace

void set_level(Level level) { g_level.store(level, std::memory_order_relaxed); }
Level level() { return g_level.load(std::memory_order_relaxed); }

void debug(const std::string& msg) { emit(Level::Debug, "[debug] ", msg); }
void info(const std::string& msg) { emit(Level::Info, "[info] ", msg); }
void warn(const std::string& msg) { emit(Level::Warn, "[warn] ", msg); }
void error(const std::string& msg) { emit(Level::Error, "[error] ", msg); }

}  // namespace newsgraph::log
