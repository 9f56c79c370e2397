#pragma once

#include <spdlog/spdlog.h>

namespace phonon::app {

/// Shared stderr logger. Level from PHONON_STATS_LOG (trace, debug, info,
/// warn, error, off; default warn).
spdlog::logger& logger();

}  // namespace phonon::app
