#pragma once

#include <string_view>

namespace fliplab {

// Routes library logging to stderr at the given level: trace, debug, info, warn, error, off.
// Unknown names throw Error(kInvalidConfig).
void configure_logging(std::string_view level);

// Uses FLIPLAB_LOG when set, otherwise `fallback`.
void configure_logging_from_env(std::string_view fallback = "warn");

}  // namespace fliplab
