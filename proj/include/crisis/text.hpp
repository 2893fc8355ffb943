#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crisis {

// Lowercased alphanumeric word tokens; used for features and encoders.
std::vector<std::string> tokenize_words(std::string_view text);

// Whitespace-separated tokens with punctuation left attached; used by EDA,
// whose output must rebuild into readable text.
std::vector<std::string> split_whitespace(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

std::string to_lower(std::string_view text);

}  // namespace crisis
