#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trxcat {

// ASCII lowercase; bytes above 0x7f pass through untouched.
std::string to_lower(std::string_view s);

// Folds accented French letters (UTF-8) to their ASCII base letter,
// lowercasing in the same pass. Unknown multi-byte sequences pass through.
std::string fold_to_ascii(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

bool contains(std::string_view haystack, std::string_view needle);

}  // namespace trxcat
