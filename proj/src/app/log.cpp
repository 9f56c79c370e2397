#include "phonon/app/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <cstdlib>

namespace phonon::app {

spdlog::logger& logger() {
  static const auto instance = [] {
    auto l = spdlog::stderr_logger_mt("phonon-stats");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("PHONON_STATS_LOG")) {
      const auto level = spdlog::level::from_str(env);
      // from_str maps unknown names to off; keep the default for those.
      if (level != spdlog::level::off || std::string_view(env) == "off") l->set_level(level);
    }
    return l;
  }();
  return *instance;
}

}  // namespace phonon::app
