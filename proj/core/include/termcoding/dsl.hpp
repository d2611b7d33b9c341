#pragma once

#include <string>
#include <string_view>

#include "termcoding/ir.hpp"

namespace termcoding {

// Parses the `.tc` format. Throws ParseError (with a span) on syntax errors
// and ValidationError when the parsed system does not type-check.
System parse(std::string_view text);

// Canonical text. parse(render(s)) == s for every valid s.
std::string render(const System& sys);

System parse_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace termcoding
