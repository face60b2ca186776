#include "riser/log.hpp"

#include <cstdlib>
#include <string_view>

namespace riser::log {

Level level() {
  static const Level cached = [] {
    const char* env = std::getenv("RISER_LOG");
    if (env == nullptr) return Level::Error;
    const std::string_view v(env);
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Error;
  }();
  return cached;
}

}  // namespace riser::log
