#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mtbl/schema.h"
#include "mtbl/string_pool.h"

namespace mtbl {

// Which layer of a task stream to read or write.
enum class Layer { kGold, kCurrent };

// Tokenized text with one gold value per stream per token and one mutable
// current tag per task per token. Tokens are stored flat with sentence
// boundary offsets; values are interned in a corpus-owned pool.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(Schema schema) : schema_(std::move(schema)) { init_columns(); }

  const Schema& schema() const { return schema_; }

  size_t sentence_count() const { return sent_begin_.empty() ? 0 : sent_begin_.size() - 1; }
  size_t token_count() const { return gold_.empty() ? 0 : gold_[0].size(); }
  uint32_t sentence_begin(size_t s) const { return sent_begin_[s]; }
  uint32_t sentence_end(size_t s) const { return sent_begin_[s + 1]; }  // exclusive
  size_t sentence_length(size_t s) const { return sentence_end(s) - sentence_begin(s); }

  // Appends a sentence given per-token, per-stream gold values. Values must be
  // non-empty and must not equal the reserved boundary value.
  void add_sentence(const std::vector<std::vector<std::string>>& tokens);

  // Gold value of a stream at a flat token position.
  const std::string& gold(size_t stream, size_t pos) const { return pool_.text(gold_[stream][pos]); }
  // Current tag of a task; throws if uninitialized.
  const std::string& current(size_t task, size_t pos) const;
  bool current_set(size_t task, size_t pos) const { return current_[task][pos] != StringPool::kUnset; }
  void set_current(size_t task, size_t pos, std::string_view tag) {
    current_[task][pos] = pool_.intern(tag);
  }
  void reset_current();

  // Id-level accessors used by matching and scoring.
  uint32_t gold_id(size_t stream, size_t pos) const { return gold_[stream][pos]; }
  uint32_t current_id(size_t task, size_t pos) const { return current_[task][pos]; }
  void set_current_id(size_t task, size_t pos, uint32_t id) { current_[task][pos] = id; }

  // Value a condition sees: the current tag for task streams, the gold value
  // otherwise. pos is clamped against [begin, end) of its sentence by callers.
  uint32_t value_id(size_t stream, size_t pos) const {
    size_t task = schema_.task_of_stream(stream);
    return task == Schema::npos ? gold_[stream][pos] : current_[task][pos];
  }

  StringPool& pool() { return pool_; }
  const StringPool& pool() const { return pool_; }
  const std::string& text(uint32_t id) const { return pool_.text(id); }

  // Sentence index owning a flat position.
  size_t sentence_of(size_t pos) const;

  // Throws unless every task has a current tag at every position.
  void require_initialized() const;

 private:
  void init_columns();

  Schema schema_;
  StringPool pool_;
  std::vector<uint32_t> sent_begin_{0};
  std::vector<std::vector<uint32_t>> gold_;     // [stream][pos]
  std::vector<std::vector<uint32_t>> current_;  // [task][pos]
};

// Reads whitespace separated columns, one token per line, blank line between
// sentences. Column count must match the schema; input must be valid UTF-8 and
// must not contain the reserved boundary value.
Corpus read_column_corpus(std::istream& in, const Schema& schema);
Corpus read_column_corpus_file(const std::string& path, const Schema& schema);

// Inverse of read: single space separated columns, trailing newline. Task
// columns come from the chosen layer; kCurrent requires initialized tags.
void write_column_corpus(const Corpus& corpus, std::ostream& out, Layer layer);
std::string write_column_corpus(const Corpus& corpus, Layer layer);

// Converts a (word, tag) corpus to character level: streams (char, seg, tag)
// where seg is B on the first character of each word and I after, and tag is
// copied to every character. Sentence boundaries are preserved.
Corpus explode_to_characters(const Corpus& corpus);

}  // namespace mtbl
