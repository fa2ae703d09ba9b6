#pragma once

#include <string>

#include <json.hpp>

namespace gcomp {

using Json = nlohmann::ordered_json;

/// 17-significant-digit rendering ("%.17g"); non-finite values become null.
[[nodiscard]] std::string format_number(double value);

/// Serializes with insertion-ordered keys, two-space indentation and every
/// floating-point number rendered by format_number.
[[nodiscard]] std::string dump_json(const Json& value);

}  // namespace gcomp
