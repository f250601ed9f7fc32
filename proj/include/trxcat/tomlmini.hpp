#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace trxcat {

// Parses the TOML subset used by the config files (tables, arrays of
// tables, dotted table names, strings, integers, floats, booleans and
// possibly multi-line arrays) into a JSON document. Throws Error(config)
// with a line number on anything outside the subset.
nlohmann::json parse_toml(std::string_view text);

// Loads a config file as JSON; .toml/.tml go through parse_toml, anything
// else is parsed as JSON.
nlohmann::json load_config_file(const std::string& path);

}  // namespace trxcat
