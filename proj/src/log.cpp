#include "hellvec/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hellvec::log {

namespace {
std::atomic<Level> g_level{Level::Warning};
std::mutex g_mutex;
}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void info(std::string_view message) {
    if (g_level < Level::Info) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[hellvec] " << message << '\n';
}

void warning(std::string_view message) {
    if (g_level < Level::Warning) return;
    std::lock_guard lock(g_mutex);
    std::cerr << "[hellvec] warning: " << message << '\n';
}

}  // namespace hellvec::log
