#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "sfc/error.hpp"

namespace sfc::detail {

using json = nlohmann::ordered_json;

json parse_json(std::string_view document, std::string_view what);

const json& require(const json& object, const char* key, std::string_view what);
std::string require_string(const json& object, const char* key, std::string_view what);
double require_number(const json& object, const char* key, std::string_view what);

/// Serializes with two-space indentation and a trailing newline so that
/// identical inputs produce byte-identical files.
std::string dump(const json& value);

}  // namespace sfc::detail
