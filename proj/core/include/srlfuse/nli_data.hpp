#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "srlfuse/esim.hpp"

namespace srlfuse {

struct NliDataset {
  std::vector<EntailmentExample> examples;
  std::size_t skipped = 0;  // records with gold_label "-"
};

// Line-delimited JSON with the SNLI field names sentence1, sentence2 and
// gold_label. Blank lines are ignored.
NliDataset read_nli_jsonl(std::istream& in, const std::string& source);
NliDataset load_nli_jsonl(const std::string& path);

}  // namespace srlfuse
