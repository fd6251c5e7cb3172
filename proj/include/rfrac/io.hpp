#pragma once

#include <string>

namespace rfrac {

/// Formats with 17 significant digits so that values round-trip exactly.
std::string format_g17(double v);

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

/// Level parsed once from RFRAC_LOG (quiet|info|debug); defaults to info.
LogLevel log_level();

void log_info(const std::string& msg);
void log_debug(const std::string& msg);

} // namespace rfrac
