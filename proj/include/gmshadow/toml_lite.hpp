#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace gmshadow {

/// Parses the TOML subset used by scenario files into JSON.
///
/// Supported: comments, [table] / [a.b] headers, bare and dotted keys, basic
/// strings, integers, floats (including exponents, inf, nan), booleans, arrays
/// (possibly spanning lines) and inline tables.  Errors carry "source:line:".
nlohmann::json parse_toml(std::string_view text, const std::string& source = "<toml>");

}  // namespace gmshadow
