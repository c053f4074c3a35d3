#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "srlfuse/bio.hpp"

namespace srlfuse {

class NeProvider {
 public:
  virtual ~NeProvider() = default;
  // BIO tags over the provider's entity types, one per token.
  virtual std::vector<BioTag> tag(std::span<const std::string> tokens) const = 0;
  virtual TagAlphabet alphabet() const = 0;
};

// Gazetteer lookup plus a capitalisation heuristic: runs of capitalised
// tokens that are not sentence-initial function words become MISC unless a
// gazetteer entry types them.
class GazetteerNeTagger final : public NeProvider {
 public:
  GazetteerNeTagger();

  void add(const std::string& word, const std::string& type);
  std::vector<BioTag> tag(std::span<const std::string> tokens) const override;
  TagAlphabet alphabet() const override;

 private:
  std::unordered_map<std::string, std::string> gazetteer_;
};

}  // namespace srlfuse
