#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rvdlm {

using Date = std::chrono::sys_days;

// Parses YYYY-MM-DD; throws DataError on anything else.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date d);

}  // namespace rvdlm
