#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mtbl {

// Contiguous labeled token range, end inclusive. Segmentation spans carry the
// implicit label below.
struct Span {
  size_t start = 0;
  size_t end = 0;
  std::string label;

  bool operator==(const Span& other) const {
    return start == other.start && end == other.end && label == other.label;
  }
  bool operator<(const Span& other) const {
    if (start != other.start) return start < other.start;
    if (end != other.end) return end < other.end;
    return label < other.label;
  }
};

inline constexpr const char* kSegmentationLabel = "WORD";

// Tags are O, B-X, I-X, or plain B/I (implicit WORD label). An I that follows
// O, the sentence start, or a different label starts a new chunk. Returned
// spans are ordered, non-overlapping, and labeled.
std::vector<Span> decode_bio(const std::vector<std::string>& tags);

// Inverse of decode_bio on repaired tag sequences. Spans must be in range,
// ordered, and non-overlapping. Spans labeled WORD emit plain B/I.
std::vector<std::string> encode_bio(const std::vector<Span>& spans, size_t length);

// Plain B/I tags to word spans labeled WORD.
std::vector<Span> decode_segmentation(const std::vector<std::string>& tags);

}  // namespace mtbl
