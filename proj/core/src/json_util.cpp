#include "json_util.hpp"

namespace sfc::detail {

json parse_json(std::string_view document, std::string_view what) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

const json& require(const json& object, const char* key, std::string_view what) {
  if (!object.is_object()) throw InputError(std::string(what) + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw InputError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& object, const char* key, std::string_view what) {
  const json& v = require(object, key, what);
  if (!v.is_string()) throw InputError(std::string(what) + ": field \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double require_number(const json& object, const char* key, std::string_view what) {
  const json& v = require(object, key, what);
  if (!v.is_number()) throw InputError(std::string(what) + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

std::string dump(const json& value) { return value.dump(2) + "\n"; }

}  // namespace sfc::detail
