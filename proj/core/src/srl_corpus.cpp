#include "srlfuse/srl_corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "srlfuse/error.hpp"

namespace srlfuse {

std::vector<SrlExample> read_srl_corpus(std::istream& in, const std::string& source) {
  std::vector<SrlExample> out;
  SrlExample current;
  std::optional<std::size_t> predicate;
  std::size_t lineno = 0, block_start = 0;
  auto where = [&](std::size_t line) { return source + ":" + std::to_string(line); };

  auto finish = [&] {
    if (current.tokens.empty()) return;
    if (!predicate)
      fail(ErrorKind::kData, where(block_start) + ": sentence " + std::to_string(out.size()) +
                                 " has no marked predicate");
    current.predicate = *predicate;
    const auto decoded = decode_spans(current.tags);
    if (!decoded.valid())
      fail(ErrorKind::kData, where(block_start) + ": sentence " + std::to_string(out.size()) +
                                 " has a dangling I tag at token " + std::to_string(decoded.repairs.front()));
    out.push_back(std::move(current));
    current = {};
    predicate.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      finish();
      continue;
    }
    if (line.front() == '#') continue;
    std::istringstream fields(line);
    std::string token, flag, tag, extra;
    if (!(fields >> token >> flag >> tag) || (fields >> extra))
      fail(ErrorKind::kData, where(lineno) + ": expected 3 columns (token, predicate flag, tag)");
    if (current.tokens.empty()) block_start = lineno;
    if (flag == "1") {
      if (predicate) fail(ErrorKind::kData, where(lineno) + ": second predicate flag in one sentence block");
      predicate = current.tokens.size();
    } else if (flag != "0") {
      fail(ErrorKind::kData, where(lineno) + ": predicate flag must be 0 or 1");
    }
    current.tokens.push_back(token);
    current.tags.push_back(BioTag::parse(tag));
  }
  finish();
  return out;
}

std::vector<SrlExample> load_srl_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open SRL corpus " + path);
  return read_srl_corpus(in, path);
}

void write_srl_corpus(std::ostream& out, const std::vector<SrlExample>& examples) {
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const auto& ex = examples[e];
    if (e > 0) out << '\n';
    for (std::size_t i = 0; i < ex.tokens.size(); ++i)
      out << ex.tokens[i] << '\t' << (i == ex.predicate ? 1 : 0) << '\t' << ex.tags[i].str() << '\n';
  }
}

}  // namespace srlfuse
