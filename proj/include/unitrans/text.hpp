#pragma once

#include <string>
#include <vector>

namespace unitrans {

// Splits on '\n', tolerating CRLF input. "a\nb\n" yields {"a", "b"}; a final
// unterminated line is kept.
std::vector<std::string> split_lines(const std::string& text);

// Joins with '\n' and no trailing newline.
std::string join_lines(const std::vector<std::string>& lines);

std::string trim(const std::string& s);

bool is_blank(const std::string& s);

}  // namespace unitrans
