#pragma once

#include <map>
#include <string>

namespace nashlab {

// Flat "key = value" file, one pair per line, '#' comments. Keys mirror the
// CLI long option names; CLI flags take precedence over file values.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

}  // namespace nashlab
