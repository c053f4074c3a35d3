#include "srlfuse/nli_data.hpp"

#include <fstream>
#include <istream>

#include "json.hpp"

#include "srlfuse/error.hpp"
#include "srlfuse/tokenizer.hpp"

namespace srlfuse {

NliDataset read_nli_jsonl(std::istream& in, const std::string& source) {
  NliDataset out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kData, where + ": malformed JSON (" + e.what() + ")");
    }
    auto field = [&](const char* key) -> std::string {
      auto it = rec.find(key);
      if (it == rec.end() || !it->is_string()) fail(ErrorKind::kData, where + ": missing string field " + key);
      return it->get<std::string>();
    };
    const std::string gold = field("gold_label");
    if (gold == "-") {
      ++out.skipped;
      continue;
    }
    const auto label = parse_nli_label(gold);
    if (!label) fail(ErrorKind::kData, where + ": unknown gold_label '" + gold + "'");
    EntailmentExample ex;
    try {
      ex.premise = tokenize_words(field("sentence1"));
      ex.hypothesis = tokenize_words(field("sentence2"));
    } catch (const Error& e) {
      fail(ErrorKind::kData, where + ": " + e.what());
    }
    if (ex.premise.empty() || ex.hypothesis.empty()) fail(ErrorKind::kData, where + ": empty sentence");
    ex.label = *label;
    out.examples.push_back(std::move(ex));
  }
  return out;
}

NliDataset load_nli_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open NLI data " + path);
  return read_nli_jsonl(in, path);
}

}  // namespace srlfuse
