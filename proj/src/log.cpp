#include "crisis/log.hpp"

#include <cstdio>
#include <mutex>
#include <utility>

namespace crisis::logging {

namespace {

std::mutex g_mutex;
Sink g_sink;

void emit(Level level, const std::string& message) {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_sink) {
    g_sink(level, message);
    return;
  }
  std::fprintf(stderr, "[%s] %s\n", level == Level::Warn ? "warn" : "info",
               message.c_str());
}

}  // namespace

void set_sink(Sink sink) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_sink = std::move(sink);
}

void info(const std::string& message) { emit(Level::Info, message); }
void warn(const std::string& message) { emit(Level::Warn, message); }

}  // namespace crisis::logging
