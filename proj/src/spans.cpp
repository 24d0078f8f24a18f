#include "mtbl/spans.h"

#include "mtbl/errors.h"

namespace mtbl {

namespace {

// Splits a tag into its B/I/O kind and label. Plain B and I carry the
// segmentation label.
struct TagParts {
  char kind;  // 'B', 'I' or 'O'
  std::string label;
};

TagParts parse_tag(const std::string& tag, size_t pos) {
  if (tag == "O") return {'O', ""};
  if (tag == "B") return {'B', kSegmentationLabel};
  if (tag == "I") return {'I', kSegmentationLabel};
  if (tag.size() >= 3 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return {tag[0], tag.substr(2)};
  }
  throw DataError("position " + std::to_string(pos) + ": malformed chunk tag '" + tag + "'");
}

}  // namespace

std::vector<Span> decode_bio(const std::vector<std::string>& tags) {
  std::vector<Span> spans;
  bool open = false;
  for (size_t i = 0; i < tags.size(); ++i) {
    TagParts t = parse_tag(tags[i], i);
    if (t.kind == 'O') {
      open = false;
      continue;
    }
    if (t.kind == 'I' && open && spans.back().label == t.label) {
      spans.back().end = i;
      continue;
    }
    // B, or an orphan I repaired into a chunk start.
    spans.push_back({i, i, t.label});
    open = true;
  }
  return spans;
}

std::vector<std::string> encode_bio(const std::vector<Span>& spans, size_t length) {
  std::vector<std::string> tags(length, "O");
  size_t prev_end = 0;
  bool first = true;
  for (const Span& s : spans) {
    if (s.start > s.end || s.end >= length) {
      throw DataError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                      "] out of range for length " + std::to_string(length));
    }
    if (!first && s.start <= prev_end) {
      throw DataError("span starting at " + std::to_string(s.start) +
                      " overlaps or is out of order");
    }
    bool plain = s.label == kSegmentationLabel;
    for (size_t i = s.start; i <= s.end; ++i) {
      const char* kind = i == s.start ? "B" : "I";
      tags[i] = plain ? kind : std::string(kind) + "-" + s.label;
    }
    prev_end = s.end;
    first = false;
  }
  return tags;
}

std::vector<Span> decode_segmentation(const std::vector<std::string>& tags) {
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] != "B" && tags[i] != "I") {
      throw DataError("position " + std::to_string(i) + ": malformed segmentation tag '" +
                      tags[i] + "'");
    }
  }
  return decode_bio(tags);
}

}  // namespace mtbl
