#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace srlfuse {

enum class BioKind : std::uint8_t { kOutside, kBegin, kInside };

// A single BIO tag. The role is empty exactly when kind is kOutside.
struct BioTag {
  BioKind kind = BioKind::kOutside;
  std::string role;

  static BioTag outside() { return {}; }
  static BioTag begin(std::string role);
  static BioTag inside(std::string role);

  // Parses "O", "B-ARG0", "I-AM-TMP". Throws Error(kData) on malformed input.
  static BioTag parse(std::string_view text);

  bool is_outside() const noexcept { return kind == BioKind::kOutside; }
  std::string str() const;

  friend bool operator==(const BioTag&, const BioTag&) = default;
};

std::ostream& operator<<(std::ostream& os, const BioTag& tag);

std::vector<BioTag> parse_tags(std::span<const std::string> texts);
std::vector<std::string> tag_strings(std::span<const BioTag> tags);

// Inclusive token span carrying a role label.
struct Span {
  std::string role;
  int start = 0;
  int end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

std::ostream& operator<<(std::ostream& os, const Span& span);

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Closed SRL label inventory. Tag ids are laid out as
//   0 -> O, 1 + 2k -> B-role_k, 2 + 2k -> I-role_k
// so the number of non-O labels equals the number of nonzero ids.
class TagAlphabet {
 public:
  TagAlphabet() : TagAlphabet(std::vector<std::string>{}) {}
  explicit TagAlphabet(std::vector<std::string> roles);

  // Collects the roles seen in the given sequences, in first-seen order.
  static TagAlphabet from_sequences(std::span<const std::vector<BioTag>> sequences);

  // One role per line; blank lines and '#' comments are ignored.
  static TagAlphabet read(std::istream& in);
  static TagAlphabet load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  const std::vector<std::string>& roles() const noexcept { return roles_; }
  const std::vector<BioTag>& tags() const noexcept { return tags_; }
  std::size_t size() const noexcept { return tags_.size(); }

  const BioTag& tag(int id) const;
  std::optional<int> find(const BioTag& tag) const;
  std::optional<int> find(std::string_view tag_text) const;
  // Throws Error(kData) if the tag is not in the alphabet.
  int id(const BioTag& tag) const;

  std::vector<int> ids(std::span<const BioTag> tags) const;
  std::vector<BioTag> to_tags(std::span<const int> ids) const;
  std::vector<std::string> tag_names() const;

  friend bool operator==(const TagAlphabet& a, const TagAlphabet& b) {
    return a.roles_ == b.roles_;
  }

 private:
  std::vector<std::string> roles_;
  std::vector<BioTag> tags_;
  std::unordered_map<std::string, int> index_;
};

// Writes B-role at each span start, I-role inside, O elsewhere.
// Throws Error(kOutOfRange) for bad indices and Error(kOverlap) for overlaps.
std::vector<BioTag> encode_spans(std::span<const Span> spans, std::size_t length);

struct SpanDecoding {
  std::vector<Span> spans;
  // Positions of dangling I tags that were repaired into B tags.
  std::vector<int> repairs;

  bool valid() const noexcept { return repairs.empty(); }
};

// Total: never throws. A dangling I-r (not preceded by B-r or I-r) opens a
// new span as if it were B-r and is reported in `repairs`.
SpanDecoding decode_spans(std::span<const BioTag> tags);

bool is_valid_bio(std::span<const BioTag> tags);

// allowed(i, j) is true iff tag j may follow tag i.
BoolMatrix transition_mask(const TagAlphabet& alphabet);
// allowed(j) is true iff a sequence may start with tag j.
BoolVector start_mask(const TagAlphabet& alphabet);

// Checks a tag-id path against the masks.
bool path_allowed(std::span<const int> path, const BoolMatrix& mask, const BoolVector& start);

}  // namespace srlfuse
