#pragma once

#include <map>
#include <string>
#include <vector>

#include "mtbl/corpus.h"

namespace mtbl {

// Per-task tag frequency tables used by the initial-state generator.
// Task t is keyed on its conditioning stream: the gold surface when the
// stream is a feature, the initial tag of the earlier task otherwise.
// Global per-task counts back unknown keys; they are the marginals of the
// keyed counts and are rebuilt from them after deserialization.
class Lexicon {
 public:
  using TagCounts = std::map<std::string, long long>;

  Lexicon() = default;
  explicit Lexicon(size_t task_count)
      : counts_(task_count), global_(task_count) {}

  size_t task_count() const { return counts_.size(); }

  // All counts must stay positive.
  void add(size_t task, const std::string& key, const std::string& tag,
           long long count = 1);

  // Argmax tag for the key, lexicographically smallest on ties; falls back
  // to the global argmax when the key is unseen. Throws if task t has no
  // entries at all.
  const std::string& tag_for(size_t task, const std::string& key) const;

  const std::map<std::string, TagCounts>& entries(size_t task) const {
    return counts_[task];
  }
  const TagCounts& global(size_t task) const { return global_[task]; }

  bool operator==(const Lexicon& other) const {
    return counts_ == other.counts_;
  }

 private:
  std::vector<std::map<std::string, TagCounts>> counts_;
  std::vector<TagCounts> global_;
};

// Counts gold co-occurrences over the training corpus. Dependent tasks are
// keyed on the earlier task's initial tags, which are computed transiently
// in task order; the corpus itself is not modified. Throws on an empty
// corpus.
Lexicon build_lexicon(const Corpus& training);

}  // namespace mtbl
