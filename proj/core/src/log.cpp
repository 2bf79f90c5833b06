#include "fliplab/log.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fliplab/error.hpp"

namespace fliplab {

void configure_logging(std::string_view level) {
  const auto parsed = spdlog::level::from_str(std::string(level));
  // from_str maps unknown names to off; only accept "off" when asked for explicitly.
  if (parsed == spdlog::level::off && level != "off") {
    fail(ErrorCode::kInvalidConfig, "unknown log level '" + std::string(level) + "'");
  }
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_color_mt("fliplab");
    logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    spdlog::set_default_logger(logger);
  });
  spdlog::set_level(parsed);
}

void configure_logging_from_env(std::string_view fallback) {
  const char* env = std::getenv("FLIPLAB_LOG");
  configure_logging(env != nullptr && *env != '\0' ? std::string_view(env) : fallback);
}

}  // namespace fliplab
