#include "mtbl/engine.h"

#include "mtbl/errors.h"
#include "mtbl/string_pool.h"

namespace mtbl {

size_t initialize(Corpus& corpus, const Lexicon& lexicon) {
  const Schema& schema = corpus.schema();
  if (lexicon.task_count() != schema.task_count()) {
    throw DataError("lexicon task count does not match the schema");
  }
  size_t changes = 0;
  for (size_t t = 0; t < schema.task_count(); ++t) {
    size_t cond = schema.condition_stream(t);
    bool cond_is_task = schema.is_task(cond);
    size_t cond_task = cond_is_task ? schema.task_of_stream(cond) : 0;
    for (size_t pos = 0; pos < corpus.token_count(); ++pos) {
      // Earlier tasks are already re-assigned this call, so current tags
      // are exactly the initial tags the lexicon was keyed on.
      const std::string& key = cond_is_task ? corpus.current(cond_task, pos)
                                            : corpus.gold(cond, pos);
      const std::string& tag = lexicon.tag_for(t, key);
      uint32_t before = corpus.current_id(t, pos);
      corpus.set_current(t, pos, tag);
      changes += corpus.current_id(t, pos) != before;
    }
  }
  return changes;
}

size_t apply_rule(const Rule& rule, Corpus& corpus) {
  corpus.require_initialized();
  const Schema& schema = corpus.schema();
  size_t target_stream = schema.stream_index(rule.target);
  if (target_stream == Schema::npos || !schema.is_task(target_stream)) {
    throw DataError("rule target '" + rule.target + "' is not a task stream");
  }
  size_t task = schema.task_of_stream(target_stream);

  size_t changes = 0;
  std::vector<size_t> matched;
  for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
    size_t begin = corpus.sentence_begin(sent);
    size_t end = corpus.sentence_end(sent);
    matched.clear();
    for (size_t pos = begin; pos < end; ++pos) {
      if (rule_matches(rule, corpus, sent, pos - begin)) matched.push_back(pos);
    }
    for (size_t pos : matched) {
      uint32_t before = corpus.current_id(task, pos);
      corpus.set_current(task, pos, rule.new_value);
      changes += corpus.current_id(task, pos) != before;
    }
  }
  return changes;
}

ApplyStats apply_model(const Model& model, Corpus& corpus) {
  if (!(corpus.schema() == model.schema)) {
    throw DataError("corpus schema does not match the model schema");
  }
  ApplyStats stats;
  stats.init_changes = initialize(corpus, model.lexicon);
  stats.rule_changes.reserve(model.rules.size());
  for (const Rule& rule : model.rules) {
    stats.rule_changes.push_back(apply_rule(rule, corpus));
  }
  return stats;
}

}  // namespace mtbl
