#include "mtbl/lexicon.h"

#include "mtbl/errors.h"

namespace mtbl {

namespace {

// First strict maximum in key order, so ties resolve to the smallest tag.
const std::string* argmax_tag(const Lexicon::TagCounts& counts) {
  const std::string* best = nullptr;
  long long best_count = 0;
  for (const auto& [tag, count] : counts) {
    if (best == nullptr || count > best_count) {
      best = &tag;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

void Lexicon::add(size_t task, const std::string& key, const std::string& tag,
                  long long count) {
  if (count <= 0) throw DataError("lexicon counts must be positive");
  counts_.at(task)[key][tag] += count;
  global_.at(task)[tag] += count;
}

const std::string& Lexicon::tag_for(size_t task,
                                    const std::string& key) const {
  const auto& keyed = counts_.at(task);
  auto it = keyed.find(key);
  const std::string* best =
      it != keyed.end() ? argmax_tag(it->second) : argmax_tag(global_.at(task));
  if (best == nullptr) throw DataError("lexicon has no entries for task");
  return *best;
}

Lexicon build_lexicon(const Corpus& training) {
  if (training.token_count() == 0) {
    throw DataError("cannot build a lexicon from an empty corpus");
  }
  const Schema& schema = training.schema();
  const auto& tasks = schema.task_streams();
  Lexicon lex(tasks.size());

  // initial[t][pos] exists once task t has been counted; later tasks that
  // condition on t read their keys from it.
  std::vector<std::vector<std::string>> initial(tasks.size());
  for (size_t t = 0; t < tasks.size(); ++t) {
    size_t cond = schema.condition_stream(t);
    auto key_at = [&](size_t pos) -> const std::string& {
      if (!schema.is_task(cond)) return training.gold(cond, pos);
      return initial[schema.task_of_stream(cond)][pos];
    };
    for (size_t pos = 0; pos < training.token_count(); ++pos) {
      lex.add(t, key_at(pos), training.gold(tasks[t], pos));
    }
    bool needed_later = false;
    for (size_t u = t + 1; u < tasks.size(); ++u) {
      needed_later |= schema.condition_stream(u) == tasks[t];
    }
    if (!needed_later) continue;
    initial[t].reserve(training.token_count());
    for (size_t pos = 0; pos < training.token_count(); ++pos) {
      initial[t].push_back(lex.tag_for(t, key_at(pos)));
    }
  }
  return lex;
}

}  // namespace mtbl
