#include "srlfuse/tokenizer.hpp"

#include <cctype>

#include "srlfuse/error.hpp"

namespace srlfuse {

namespace {

// Length of the UTF-8 sequence starting at s[i], or 0 if invalid.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  std::size_t n = 0;
  if (c < 0x80) return 1;
  if ((c & 0xe0) == 0xc0) n = 2;
  else if ((c & 0xf0) == 0xe0) n = 3;
  else if ((c & 0xf8) == 0xf0) n = 4;
  else return 0;
  if (i + n > s.size()) return 0;
  for (std::size_t k = 1; k < n; ++k)
    if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) return 0;
  return n;
}

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }
bool is_alnum(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

}  // namespace

std::vector<TextToken> tokenize(std::string_view text) {
  std::vector<TextToken> tokens;
  std::size_t i = 0;
  std::size_t word_begin = std::string_view::npos;
  auto flush = [&](std::size_t end) {
    if (word_begin != std::string_view::npos && end > word_begin)
      tokens.push_back({std::string(text.substr(word_begin, end - word_begin)), word_begin, end});
    word_begin = std::string_view::npos;
  };
  while (i < text.size()) {
    const std::size_t n = utf8_length(text, i);
    if (n == 0) fail(ErrorKind::kData, "invalid UTF-8 at byte " + std::to_string(i));
    const auto c = static_cast<unsigned char>(text[i]);
    if (n == 1 && is_space(c)) {
      flush(i);
    } else if (n == 1 && is_punct(c)) {
      // Keep "don't", "well-known", "3.5" together.
      const bool joiner = (c == '\'' || c == '-' || c == '.' || c == ',') && word_begin != std::string_view::npos &&
                          i + 1 < text.size() && is_alnum(static_cast<unsigned char>(text[i + 1])) &&
                          is_alnum(static_cast<unsigned char>(text[i - 1])) &&
                          (c == '\'' || c == '-' || std::isdigit(static_cast<unsigned char>(text[i - 1])));
      if (!joiner) {
        flush(i);
        tokens.push_back({std::string(1, text[i]), i, i + 1});
      }
    } else if (word_begin == std::string_view::npos) {
      word_begin = i;
    }
    i += n;
  }
  flush(text.size());
  return tokens;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "." || tokens[i] == "!" || tokens[i] == "?") {
      ranges.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  }
  if (begin < tokens.size()) ranges.emplace_back(begin, tokens.size());
  return ranges;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace srlfuse
