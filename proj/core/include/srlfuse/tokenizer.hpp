#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace srlfuse {

struct TextToken {
  std::string text;
  std::size_t begin = 0;  // byte offset, inclusive
  std::size_t end = 0;    // byte offset, exclusive
};

// Whitespace split with punctuation peeled off as separate tokens. Apostrophes
// and hyphens between letters stay inside the word. Throws Error(kData) on
// invalid UTF-8.
std::vector<TextToken> tokenize(std::string_view text);
std::vector<std::string> tokenize_words(std::string_view text);

// Half-open [begin, end) token ranges, split after '.', '!' and '?'.
std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(const std::vector<std::string>& tokens);

std::string join(const std::vector<std::string>& parts, std::string_view sep = " ");

}  // namespace srlfuse
