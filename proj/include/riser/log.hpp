#pragma once

// Minimal stderr logging. Verbosity comes from RISER_LOG = error | info | debug
// (default error).

#include <cstdio>
#include <utility>

#include <fmt/format.h>

namespace riser::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

Level level();

template <typename... Args>
void write(Level lvl, const char* tag, fmt::format_string<Args...> f, Args&&... args) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  fmt::print(stderr, "[riser {}] {}\n", tag, fmt::format(f, std::forward<Args>(args)...));
}

template <typename... Args>
void error(fmt::format_string<Args...> f, Args&&... args) {
  write(Level::Error, "error", f, std::forward<Args>(args)...);
}
template <typename... Args>
void info(fmt::format_string<Args...> f, Args&&... args) {
  write(Level::Info, "info", f, std::forward<Args>(args)...);
}
template <typename... Args>
void debug(fmt::format_string<Args...> f, Args&&... args) {
  write(Level::Debug, "debug", f, std::forward<Args>(args)...);
}

}  // namespace riser::log
