#include "srlfuse/bio.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "srlfuse/error.hpp"

namespace srlfuse {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kOutOfRange: return "out-of-range";
    case ErrorKind::kOverlap: return "overlap";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kData: return "data";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kModel: return "model";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

BioTag BioTag::begin(std::string role) {
  if (role.empty()) fail(ErrorKind::kInvalidArgument, "B tag requires a role");
  return {BioKind::kBegin, std::move(role)};
}

BioTag BioTag::inside(std::string role) {
  if (role.empty()) fail(ErrorKind::kInvalidArgument, "I tag requires a role");
  return {BioKind::kInside, std::move(role)};
}

BioTag BioTag::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() > 2 && text[1] == '-') {
    if (text[0] == 'B') return begin(std::string(text.substr(2)));
    if (text[0] == 'I') return inside(std::string(text.substr(2)));
  }
  fail(ErrorKind::kData, "malformed BIO tag '" + std::string(text) + "'");
}

std::string BioTag::str() const {
  switch (kind) {
    case BioKind::kOutside: return "O";
    case BioKind::kBegin: return "B-" + role;
    case BioKind::kInside: return "I-" + role;
  }
  return "O";
}

std::ostream& operator<<(std::ostream& os, const BioTag& tag) { return os << tag.str(); }

std::ostream& operator<<(std::ostream& os, const Span& span) {
  return os << '(' << span.role << ',' << span.start << ',' << span.end << ')';
}

std::vector<BioTag> parse_tags(std::span<const std::string> texts) {
  std::vector<BioTag> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(BioTag::parse(t));
  return out;
}

std::vector<std::string> tag_strings(std::span<const BioTag> tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(t.str());
  return out;
}

// ---------------------------------------------------------------------------
// TagAlphabet

TagAlphabet::TagAlphabet(std::vector<std::string> roles) : roles_(std::move(roles)) {
  std::unordered_set<std::string> seen;
  tags_.reserve(2 * roles_.size() + 1);
  tags_.push_back(BioTag::outside());
  for (const auto& r : roles_) {
    if (r.empty()) fail(ErrorKind::kInvalidArgument, "role label must be non-empty");
    if (!seen.insert(r).second) fail(ErrorKind::kInvalidArgument, "duplicate role label '" + r + "'");
    tags_.push_back(BioTag::begin(r));
    tags_.push_back(BioTag::inside(r));
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) index_.emplace(tags_[i].str(), static_cast<int>(i));
}

TagAlphabet TagAlphabet::from_sequences(std::span<const std::vector<BioTag>> sequences) {
  std::vector<std::string> roles;
  std::unordered_set<std::string> seen;
  for (const auto& seq : sequences)
    for (const auto& t : seq)
      if (!t.is_outside() && seen.insert(t.role).second) roles.push_back(t.role);
  return TagAlphabet(std::move(roles));
}

TagAlphabet TagAlphabet::read(std::istream& in) {
  std::vector<std::string> roles;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    roles.push_back(line.substr(b, e - b + 1));
  }
  return TagAlphabet(std::move(roles));
}

TagAlphabet TagAlphabet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open alphabet file " + path);
  return read(in);
}

void TagAlphabet::write(std::ostream& out) const {
  for (const auto& r : roles_) out << r << '\n';
}

void TagAlphabet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write alphabet file " + path);
  write(out);
}

const BioTag& TagAlphabet::tag(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tags_.size())
    fail(ErrorKind::kOutOfRange, "tag id " + std::to_string(id) + " outside alphabet");
  return tags_[static_cast<std::size_t>(id)];
}

std::optional<int> TagAlphabet::find(std::string_view tag_text) const {
  auto it = index_.find(std::string(tag_text));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> TagAlphabet::find(const BioTag& tag) const { return find(tag.str()); }

int TagAlphabet::id(const BioTag& tag) const {
  auto id = find(tag);
  if (!id) fail(ErrorKind::kData, "tag '" + tag.str() + "' is not in the alphabet");
  return *id;
}

std::vector<int> TagAlphabet::ids(std::span<const BioTag> tags) const {
  std::vector<int> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(id(t));
  return out;
}

std::vector<BioTag> TagAlphabet::to_tags(std::span<const int> ids) const {
  std::vector<BioTag> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(tag(i));
  return out;
}

std::vector<std::string> TagAlphabet::tag_names() const { return tag_strings(tags_); }

// ---------------------------------------------------------------------------
// Span codec

std::vector<BioTag> encode_spans(std::span<const Span> spans, std::size_t length) {
  std::vector<BioTag> out(length);
  std::vector<bool> covered(length, false);
  for (const auto& s : spans) {
    if (s.role.empty()) fail(ErrorKind::kInvalidArgument, "span role must be non-empty");
    if (s.start < 0 || s.end < s.start || static_cast<std::size_t>(s.end) >= length) {
      std::ostringstream msg;
      msg << "span " << s << " out of range for length " << length;
      fail(ErrorKind::kOutOfRange, msg.str());
    }
    for (int i = s.start; i <= s.end; ++i) {
      auto u = static_cast<std::size_t>(i);
      if (covered[u]) {
        std::ostringstream msg;
        msg << "span " << s << " overlaps another span at token " << i;
        fail(ErrorKind::kOverlap, msg.str());
      }
      covered[u] = true;
      out[u] = i == s.start ? BioTag::begin(s.role) : BioTag::inside(s.role);
    }
  }
  return out;
}

SpanDecoding decode_spans(std::span<const BioTag> tags) {
  SpanDecoding result;
  std::optional<Span> open;
  auto close = [&] {
    if (open) result.spans.push_back(*open);
    open.reset();
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto& t = tags[i];
    const int pos = static_cast<int>(i);
    switch (t.kind) {
      case BioKind::kOutside:
        close();
        break;
      case BioKind::kBegin:
        close();
        open = Span{t.role, pos, pos};
        break;
      case BioKind::kInside:
        if (open && open->role == t.role) {
          open->end = pos;
        } else {
          close();
          result.repairs.push_back(pos);
          open = Span{t.role, pos, pos};
        }
        break;
    }
  }
  close();
  return result;
}

bool is_valid_bio(std::span<const BioTag> tags) { return decode_spans(tags).valid(); }

BoolMatrix transition_mask(const TagAlphabet& alphabet) {
  const auto n = static_cast<Eigen::Index>(alphabet.size());
  BoolMatrix mask = BoolMatrix::Constant(n, n, true);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& to = alphabet.tag(static_cast<int>(j));
    if (to.kind != BioKind::kInside) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& from = alphabet.tag(static_cast<int>(i));
      mask(i, j) = !from.is_outside() && from.role == to.role;
    }
  }
  return mask;
}

BoolVector start_mask(const TagAlphabet& alphabet) {
  const auto n = static_cast<Eigen::Index>(alphabet.size());
  BoolVector mask(n);
  for (Eigen::Index j = 0; j < n; ++j) mask(j) = alphabet.tag(static_cast<int>(j)).kind != BioKind::kInside;
  return mask;
}

bool path_allowed(std::span<const int> path, const BoolMatrix& mask, const BoolVector& start) {
  for (std::size_t t = 0; t < path.size(); ++t) {
    const int cur = path[t];
    if (cur < 0 || cur >= mask.cols()) return false;
    if (t == 0 ? !start(cur) : !mask(path[t - 1], cur)) return false;
  }
  return true;
}

}  // namespace srlfuse
