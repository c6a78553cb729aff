#pragma once

#include <string>

#include "json.hpp"

namespace zw {

/** Two-space indented JSON with sorted keys; arrays of plain values stay on
 *  one line. Ends with a newline. */
std::string format_json(const nlohmann::json& j);

}  // namespace zw
