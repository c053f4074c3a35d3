#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srlfuse/reader.hpp"

namespace srlfuse {

// Reads the SQuAD v1.1 layout: data[].paragraphs[].{context, qas[]} where each
// qa has id, question and answers[].{text, answer_start}. The first answer is
// aligned to document tokens; all answer texts are kept as golds.
std::vector<ReadingExample> read_squad_json(std::istream& in, const std::string& source);
std::vector<ReadingExample> load_squad_json(const std::string& path);

// Token span for `answer` in the tokenised document. Candidates are found by
// normalised match; `char_offset` (code points, as in SQuAD) picks among
// several matches and is tried first when given.
std::optional<std::pair<int, int>> align_answer(const ReadingExample& doc, std::string_view answer,
                                                std::optional<std::size_t> char_offset);

// Byte offset of the code point at `index` in UTF-8 text (size() when past the end).
std::size_t utf8_byte_offset(std::string_view text, std::size_t index);

}  // namespace srlfuse
