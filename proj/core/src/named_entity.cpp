#include "srlfuse/named_entity.hpp"

#include <array>
#include <cctype>

namespace srlfuse {

namespace {

constexpr std::array<std::pair<const char*, const char*>, 22> kGazetteer{{
    {"Charlie", "PER"}, {"Sherry", "PER"}, {"Mary", "PER"}, {"John", "PER"}, {"Alice", "PER"},
    {"Bob", "PER"}, {"Anna", "PER"}, {"Tom", "PER"}, {"Paris", "LOC"}, {"London", "LOC"},
    {"Berlin", "LOC"}, {"Tokyo", "LOC"}, {"France", "LOC"}, {"China", "LOC"}, {"Europe", "LOC"},
    {"Google", "ORG"}, {"Microsoft", "ORG"}, {"Stanford", "ORG"}, {"OntoNotes", "MISC"},
    {"PropBank", "MISC"}, {"SNLI", "MISC"}, {"SQuAD", "MISC"},
}};

constexpr std::array<const char*, 4> kTypes{"PER", "LOC", "ORG", "MISC"};

bool capitalised(const std::string& w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w.front()));
}

}  // namespace

GazetteerNeTagger::GazetteerNeTagger() {
  for (const auto& [w, t] : kGazetteer) gazetteer_.emplace(w, t);
}

void GazetteerNeTagger::add(const std::string& word, const std::string& type) { gazetteer_[word] = type; }

TagAlphabet GazetteerNeTagger::alphabet() const { return TagAlphabet({kTypes.begin(), kTypes.end()}); }

std::vector<BioTag> GazetteerNeTagger::tag(std::span<const std::string> tokens) const {
  std::vector<BioTag> out(tokens.size());
  std::string open_type;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& w = tokens[i];
    std::string type;
    if (auto it = gazetteer_.find(w); it != gazetteer_.end()) {
      type = it->second;
    } else if (capitalised(w) && i > 0) {
      type = "MISC";
    }
    if (type.empty()) {
      open_type.clear();
      continue;
    }
    out[i] = type == open_type ? BioTag::inside(type) : BioTag::begin(type);
    open_type = type;
  }
  return out;
}

}  // namespace srlfuse
