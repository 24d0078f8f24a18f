#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtbl/rational.h"

namespace mtbl {

// One column of the corpus. Static feature streams carry immutable values;
// task streams additionally carry a mutable current tag per token.
struct StreamDecl {
  std::string name;
  bool is_task = false;
  Rational weight{1};        // objective weight, tasks only
  std::string condition_on;  // lexicon key stream, tasks only
};

// Column layout plus per-task settings. Immutable after validation.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<StreamDecl> streams);

  const std::vector<StreamDecl>& streams() const { return streams_; }
  size_t stream_count() const { return streams_.size(); }
  size_t task_count() const { return task_streams_.size(); }

  // Index into streams() for each task, in declaration order.
  const std::vector<size_t>& task_streams() const { return task_streams_; }

  // Stream index by name; npos when absent.
  size_t stream_index(const std::string& name) const;
  // Task index (position within task_streams()) of a stream index; npos when
  // the stream is not a task.
  size_t task_of_stream(size_t stream) const { return task_of_stream_[stream]; }

  const std::string& stream_name(size_t i) const { return streams_[i].name; }
  bool is_task(size_t stream) const { return streams_[stream].is_task; }
  Rational task_weight(size_t task) const { return streams_[task_streams_[task]].weight; }
  const std::string& task_name(size_t task) const { return streams_[task_streams_[task]].name; }

  // Stream index a task's lexicon is keyed on.
  size_t condition_stream(size_t task) const { return condition_streams_[task]; }

  bool operator==(const Schema& other) const;

  static constexpr size_t npos = SIZE_MAX;

 private:
  std::vector<StreamDecl> streams_;
  std::vector<size_t> task_streams_;
  std::vector<size_t> task_of_stream_;
  std::vector<size_t> condition_streams_;
};

}  // namespace mtbl
