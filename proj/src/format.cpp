#include "gcomp/format.hpp"

#include <cmath>
#include <cstdio>

namespace gcomp {

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write(const Json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : v.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad + Json(key).dump() + ": ";
                write(item, out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            bool scalar_only = true;
            for (const auto& item : v) {
                scalar_only = scalar_only && !item.is_structured();
            }
            if (scalar_only) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i > 0) {
                        out += ", ";
                    }
                    write(v[i], out, depth + 1);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) {
                    out += ",\n";
                }
                out += pad;
                write(v[i], out, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_number(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const Json& value) {
    std::string out;
    write(value, out, 0);
    out += "\n";
    return out;
}

}  // namespace gcomp
