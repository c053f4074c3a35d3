#include "srlfuse/squad_data.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>

#include "json.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/metrics.hpp"

namespace srlfuse {

std::size_t utf8_byte_offset(std::string_view text, std::size_t index) {
  std::size_t cp = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;
    if (cp == index) return i;
    ++cp;
  }
  return text.size();
}

std::optional<std::pair<int, int>> align_answer(const ReadingExample& doc, std::string_view answer,
                                                std::optional<std::size_t> char_offset) {
  const auto target = normalize_answer(answer);
  const int n = static_cast<int>(doc.document.size());
  if (target.empty() || n == 0) return std::nullopt;

  std::optional<std::size_t> byte_begin;
  if (char_offset) {
    const std::size_t b = utf8_byte_offset(doc.context, *char_offset);
    const std::size_t e = b + answer.size();
    int s = -1, t = -1;
    for (int i = 0; i < n; ++i) {
      const auto& tok = doc.document[static_cast<std::size_t>(i)];
      if (s < 0 && tok.end > b) s = i;
      if (tok.begin < e) t = i;
    }
    if (s >= 0 && t >= s && normalize_answer(doc.span_text(s, t)) == target) return std::pair{s, t};
    byte_begin = b;
  }

  const int max_len = static_cast<int>(tokenize(answer).size()) + 2;
  std::optional<std::pair<int, int>> best;
  std::size_t best_distance = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n && j < i + max_len; ++j) {
      if (normalize_answer(doc.span_text(i, j)) != target) continue;
      const std::size_t begin = doc.document[static_cast<std::size_t>(i)].begin;
      const std::size_t distance =
          byte_begin ? (begin > *byte_begin ? begin - *byte_begin : *byte_begin - begin) : 0;
      if (!best || distance < best_distance) {
        best = std::pair{i, j};
        best_distance = distance;
      }
      break;
    }
  }
  return best;
}

std::vector<ReadingExample> read_squad_json(std::istream& in, const std::string& source) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kData, source + ": malformed JSON (" + e.what() + ")");
  }
  std::vector<ReadingExample> out;
  try {
    for (const auto& article : root.at("data")) {
      for (const auto& para : article.at("paragraphs")) {
        const std::string context = para.at("context").get<std::string>();
        ReadingExample base;
        base.context = context;
        base.document = tokenize(context);
        for (const auto& qa : para.at("qas")) {
          ReadingExample ex = base;
          ex.id = qa.contains("id") ? qa.at("id").get<std::string>() : std::to_string(out.size());
          const std::string where = source + ": question " + ex.id;
          ex.question = tokenize_words(qa.at("question").get<std::string>());
          if (ex.question.empty()) fail(ErrorKind::kData, where + ": empty question");
          const auto& answers = qa.at("answers");
          if (answers.empty()) fail(ErrorKind::kData, where + ": no answers");
          for (const auto& a : answers) ex.answers.push_back(a.at("text").get<std::string>());
          std::optional<std::size_t> offset;
          if (answers[0].contains("answer_start")) offset = answers[0].at("answer_start").get<std::size_t>();
          const auto span = align_answer(ex, ex.answers[0], offset);
          if (!span) fail(ErrorKind::kData, where + ": answer '" + ex.answers[0] + "' not found in the document");
          ex.answer_start = span->first;
          ex.answer_end = span->second;
          out.push_back(std::move(ex));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kData, source + ": unexpected SQuAD structure (" + e.what() + ")");
  }
  return out;
}

std::vector<ReadingExample> load_squad_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open reading data " + path);
  return read_squad_json(in, path);
}

}  // namespace srlfuse
