#ifndef HELLVEC_LOG_HPP
#define HELLVEC_LOG_HPP

#include <string_view>

namespace hellvec::log {

enum class Level { Quiet, Warning, Info };

void set_level(Level level);
Level level();

void info(std::string_view message);
void warning(std::string_view message);

}  // namespace hellvec::log

#endif
