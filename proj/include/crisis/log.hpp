#pragma once

#include <functional>
#include <string>

namespace crisis::logging {

enum class Level { Info, Warn };

using Sink = std::function<void(Level, const std::string&)>;

// Replaces the process-wide sink; an empty sink restores the stderr default.
void set_sink(Sink sink);

void info(const std::string& message);
void warn(const std::string& message);

}  // namespace crisis::logging
