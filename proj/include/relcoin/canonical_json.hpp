#pragma once

// Byte-stable JSON rendering. Object fields keep insertion order and
// floating-point values are printed with 17 significant digits, which
// round-trips every finite double exactly.

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "relcoin/error.hpp"

namespace relcoin {

using ojson = nlohmann::ordered_json;

inline std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace detail {

inline void dump_canonical(const ojson& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out.push_back('\n');
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        newline(depth + 1);
        out += ojson(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_canonical(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out.push_back('}');
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (coordinates, [re, im] pairs) stay on one line.
      bool scalar_only = j.size() <= 4;
      for (const auto& e : j) scalar_only = scalar_only && e.is_number();
      out.push_back('[');
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += scalar_only && indent >= 0 ? ", " : ",";
        first = false;
        if (!scalar_only) newline(depth + 1);
        dump_canonical(e, out, indent, depth + 1);
      }
      if (!scalar_only) newline(depth);
      out.push_back(']');
      return;
    }
    case ojson::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

inline std::string canonical_dump(const ojson& j, int indent = 2) {
  std::string out;
  detail::dump_canonical(j, out, indent, 0);
  if (indent >= 0) out.push_back('\n');
  return out;
}

// Rejects keys outside `allowed`, naming the offending key and context.
inline void require_known_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                               std::string_view context) {
  if (!j.is_object()) throw ConfigError(std::string(context) + ": expected a JSON object");
  const std::set<std::string_view> keys(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!keys.contains(it.key())) {
      throw ConfigError(std::string(context) + ": unknown field '" + it.key() + "'");
    }
  }
}

}  // namespace relcoin
