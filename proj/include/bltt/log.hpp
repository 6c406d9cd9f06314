#pragma once

#include <functional>
#include <string_view>

namespace bltt {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the warning sink (default: one line on stderr). Returns the
/// previous sink so callers can restore it.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

} // namespace bltt
