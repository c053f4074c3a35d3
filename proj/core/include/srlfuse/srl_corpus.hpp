#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "srlfuse/srl.hpp"

namespace srlfuse {

// CoNLL-style SRL columns: `token <TAB> predicate-flag <TAB> BIO-tag`, one
// token per line, blank line between sentences, '#' lines ignored. The flag
// is 1 on exactly one token per sentence and 0 elsewhere. A sentence with k
// predicates appears as k blocks.
std::vector<SrlExample> read_srl_corpus(std::istream& in, const std::string& source = "<stream>");
std::vector<SrlExample> load_srl_corpus(const std::string& path);
void write_srl_corpus(std::ostream& out, const std::vector<SrlExample>& examples);

}  // namespace srlfuse
