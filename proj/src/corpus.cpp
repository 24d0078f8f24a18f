#include "mtbl/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mtbl/errors.h"
#include "mtbl/utf8.h"

namespace mtbl {

namespace {

const std::string kForbiddenNameChars = "[]=,>";

void check_stream_name(const std::string& name) {
  if (name.empty()) throw ConfigError("stream name must not be empty");
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
        kForbiddenNameChars.find(c) != std::string::npos) {
      throw ConfigError("stream name '" + name + "' contains a forbidden character");
    }
  }
  if (name[0] == '#') throw ConfigError("stream name '" + name + "' must not start with '#'");
}

}  // namespace

Schema::Schema(std::vector<StreamDecl> streams) : streams_(std::move(streams)) {
  if (streams_.empty()) throw ConfigError("schema needs at least one stream");
  task_of_stream_.assign(streams_.size(), npos);
  for (size_t i = 0; i < streams_.size(); ++i) {
    check_stream_name(streams_[i].name);
    for (size_t j = 0; j < i; ++j) {
      if (streams_[j].name == streams_[i].name) {
        throw ConfigError("duplicate stream name '" + streams_[i].name + "'");
      }
    }
    if (streams_[i].is_task) {
      if (streams_[i].weight < Rational(0)) {
        throw ConfigError("task '" + streams_[i].name + "' has a negative weight");
      }
      task_of_stream_[i] = task_streams_.size();
      task_streams_.push_back(i);
    }
  }
  if (task_streams_.empty()) throw ConfigError("schema needs at least one task stream");
  if (task_streams_.size() == streams_.size()) {
    throw ConfigError("schema needs at least one static feature stream");
  }

  // Lexicon keys: a feature stream, or an earlier task whose initial tags are
  // assigned first. Default is the first feature stream.
  size_t first_feature = npos;
  for (size_t i = 0; i < streams_.size(); ++i) {
    if (!streams_[i].is_task) {
      first_feature = i;
      break;
    }
  }
  for (size_t t = 0; t < task_streams_.size(); ++t) {
    const StreamDecl& decl = streams_[task_streams_[t]];
    if (decl.condition_on.empty()) {
      condition_streams_.push_back(first_feature);
      continue;
    }
    size_t key = stream_index(decl.condition_on);
    if (key == npos) {
      throw ConfigError("task '" + decl.name + "' conditions on unknown stream '" +
                        decl.condition_on + "'");
    }
    if (streams_[key].is_task && task_of_stream_[key] >= t) {
      throw ConfigError("task '" + decl.name + "' must condition on a feature or an earlier task");
    }
    condition_streams_.push_back(key);
  }
}

size_t Schema::stream_index(const std::string& name) const {
  for (size_t i = 0; i < streams_.size(); ++i) {
    if (streams_[i].name == name) return i;
  }
  return npos;
}

bool Schema::operator==(const Schema& other) const {
  if (streams_.size() != other.streams_.size()) return false;
  for (size_t i = 0; i < streams_.size(); ++i) {
    const StreamDecl& a = streams_[i];
    const StreamDecl& b = other.streams_[i];
    if (a.name != b.name || a.is_task != b.is_task || a.weight != b.weight) return false;
  }
  return condition_streams_ == other.condition_streams_;
}

void Corpus::init_columns() {
  gold_.assign(schema_.stream_count(), {});
  current_.assign(schema_.task_count(), {});
}

void Corpus::add_sentence(const std::vector<std::vector<std::string>>& tokens) {
  if (tokens.empty()) throw DataError("empty sentence");
  // Validate everything first so a rejected sentence leaves no partial state.
  for (const auto& tok : tokens) {
    if (tok.size() != schema_.stream_count()) {
      throw DataError("token has " + std::to_string(tok.size()) + " columns, schema has " +
                      std::to_string(schema_.stream_count()));
    }
    for (const auto& v : tok) {
      if (v.empty()) throw DataError("empty token value");
      if (v == StringPool::kOobText) {
        throw DataError(std::string("token value '") + StringPool::kOobText + "' is reserved");
      }
      // Values are whitespace delimited in every text format.
      if (v.find_first_of(" \t\r\n") != std::string::npos) {
        throw DataError("token value '" + v + "' contains whitespace");
      }
    }
  }
  for (const auto& tok : tokens) {
    for (size_t s = 0; s < tok.size(); ++s) gold_[s].push_back(pool_.intern(tok[s]));
    for (size_t t = 0; t < schema_.task_count(); ++t) current_[t].push_back(StringPool::kUnset);
  }
  sent_begin_.push_back(static_cast<uint32_t>(gold_[0].size()));
}

const std::string& Corpus::current(size_t task, size_t pos) const {
  uint32_t id = current_[task][pos];
  if (id == StringPool::kUnset) throw DataError("current tag read before initialization");
  return pool_.text(id);
}

void Corpus::reset_current() {
  for (auto& col : current_) std::fill(col.begin(), col.end(), StringPool::kUnset);
}

void Corpus::require_initialized() const {
  for (size_t t = 0; t < current_.size(); ++t) {
    for (uint32_t id : current_[t]) {
      if (id == StringPool::kUnset) {
        throw DataError("corpus has uninitialized current tags for task '" +
                        schema_.task_name(t) + "'");
      }
    }
  }
}

size_t Corpus::sentence_of(size_t pos) const {
  auto it = std::upper_bound(sent_begin_.begin(), sent_begin_.end(), static_cast<uint32_t>(pos));
  return static_cast<size_t>(it - sent_begin_.begin()) - 1;
}

Corpus read_column_corpus(std::istream& in, const Schema& schema) {
  Corpus corpus(schema);
  std::vector<std::vector<std::string>> sentence;
  std::string line;
  size_t line_no = 0;
  auto flush = [&] {
    if (!sentence.empty()) {
      corpus.add_sentence(sentence);
      sentence.clear();
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8_valid(line)) throw DataError("line " + std::to_string(line_no) + ": not valid UTF-8");
    size_t i = 0, n = line.size();
    std::vector<std::string> cols;
    while (i < n) {
      while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
      size_t start = i;
      while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) cols.emplace_back(line.substr(start, i - start));
    }
    if (cols.empty()) {
      flush();  // consecutive blank lines produce no empty sentences
      continue;
    }
    if (cols.size() != schema.stream_count()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(schema.stream_count()) + " columns, got " +
                      std::to_string(cols.size()));
    }
    for (const auto& c : cols) {
      if (c == StringPool::kOobText) {
        throw DataError("line " + std::to_string(line_no) + ": value '" + c + "' is reserved");
      }
    }
    sentence.push_back(std::move(cols));
  }
  flush();
  return corpus;
}

Corpus read_column_corpus_file(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file: " + path);
  return read_column_corpus(in, schema);
}

void write_column_corpus(const Corpus& corpus, std::ostream& out, Layer layer) {
  const Schema& schema = corpus.schema();
  for (size_t s = 0; s < corpus.sentence_count(); ++s) {
    if (s > 0) out << '\n';
    for (size_t pos = corpus.sentence_begin(s); pos < corpus.sentence_end(s); ++pos) {
      for (size_t col = 0; col < schema.stream_count(); ++col) {
        if (col > 0) out << ' ';
        size_t task = schema.task_of_stream(col);
        if (layer == Layer::kCurrent && task != Schema::npos) {
          out << corpus.current(task, pos);
        } else {
          out << corpus.gold(col, pos);
        }
      }
      out << '\n';
    }
  }
}

std::string write_column_corpus(const Corpus& corpus, Layer layer) {
  std::ostringstream out;
  write_column_corpus(corpus, out, layer);
  return out.str();
}

Corpus explode_to_characters(const Corpus& corpus) {
  const Schema& in = corpus.schema();
  if (in.stream_count() != 2) {
    throw DataError("character explosion expects a two column (word, tag) corpus");
  }
  Schema out_schema(std::vector<StreamDecl>{
      {"char", false, Rational(1), ""},
      {"seg", true, Rational(1), "char"},
      {in.stream_name(1), true, Rational(1), "char"},
  });
  Corpus out(out_schema);
  for (size_t s = 0; s < corpus.sentence_count(); ++s) {
    std::vector<std::vector<std::string>> sentence;
    for (size_t pos = corpus.sentence_begin(s); pos < corpus.sentence_end(s); ++pos) {
      const std::string& word = corpus.gold(0, pos);
      const std::string& tag = corpus.gold(1, pos);
      std::vector<std::string> chars = utf8_chars(word);
      for (size_t i = 0; i < chars.size(); ++i) {
        sentence.push_back({chars[i], i == 0 ? "B" : "I", tag});
      }
    }
    out.add_sentence(sentence);
  }
  return out;
}

}  // namespace mtbl
