#include "mtbl/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include "mtbl/engine.h"
#include "mtbl/errors.h"
#include "mtbl/eval.h"
#include "mtbl/lexicon.h"
#include "mtbl/spans.h"

namespace mtbl {

namespace {

void require_distribution(const ConditionalDist& d) {
  double sum = 0.0;
  for (const auto& [tag, p] : d.probs) {
    if (p < 0.0) throw DataError("negative probability for tag '" + tag + "'");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("distribution for '" + d.key + "' does not sum to 1");
  }
}

std::string format_4dp(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// First feature stream: the surface form distributions are keyed on.
size_t surface_stream(const Schema& schema) {
  for (size_t s = 0; s < schema.stream_count(); ++s) {
    if (!schema.is_task(s)) return s;
  }
  throw DataError("schema has no feature stream");
}

}  // namespace

double kl_divergence(const ConditionalDist& p, const ConditionalDist& q) {
  require_distribution(p);
  require_distribution(q);
  double sum = 0.0;
  for (const auto& [tag, pp] : p.probs) {
    if (pp == 0.0) continue;
    auto it = q.probs.find(tag);
    if (it == q.probs.end() || it->second <= 0.0) {
      throw DataError("q assigns zero mass to '" + tag +
                      "' where p is positive; smooth the inputs");
    }
    sum += pp * std::log(pp / it->second);
  }
  return sum;
}

ConditionalDist smoothed_conditional(const std::string& word,
                                     const std::map<std::string, long long>& counts,
                                     const std::set<std::string>& alphabet) {
  if (alphabet.empty()) throw DataError("smoothing needs a non-empty alphabet");
  long long total = 0;
  for (const auto& [tag, count] : counts) {
    if (alphabet.count(tag) == 0) {
      throw DataError("tag '" + tag + "' is outside the smoothing alphabet");
    }
    total += count;
  }
  double denom = static_cast<double>(total) +
                 kDistSmoothing * static_cast<double>(alphabet.size());
  ConditionalDist dist;
  dist.key = word;
  for (const std::string& tag : alphabet) {
    auto it = counts.find(tag);
    long long c = it == counts.end() ? 0 : it->second;
    dist.probs[tag] = (static_cast<double>(c) + kDistSmoothing) / denom;
  }
  return dist;
}

std::map<std::string, ConditionalDist> build_conditionals(
    const Corpus& corpus, const std::string& task, const std::string& word_stream,
    const std::set<std::string>& alphabet) {
  corpus.require_initialized();
  const Schema& schema = corpus.schema();
  size_t task_stream = schema.stream_index(task);
  if (task_stream == Schema::npos || !schema.is_task(task_stream)) {
    throw DataError("unknown task '" + task + "'");
  }
  size_t t = schema.task_of_stream(task_stream);
  size_t words = schema.stream_index(word_stream);
  if (words == Schema::npos) throw DataError("unknown stream '" + word_stream + "'");

  std::map<std::string, std::map<std::string, long long>> counts;
  for (size_t pos = 0; pos < corpus.token_count(); ++pos) {
    counts[corpus.gold(words, pos)][corpus.current(t, pos)] += 1;
  }
  std::map<std::string, ConditionalDist> out;
  for (const auto& [word, tag_counts] : counts) {
    out.emplace(word, smoothed_conditional(word, tag_counts, alphabet));
  }
  return out;
}

DivergenceReport divergence_report(
    const Corpus& train, const Corpus& test, const std::string& task,
    const std::vector<std::pair<std::string, const Corpus*>>& systems,
    size_t bucket_count) {
  if (bucket_count == 0) throw ConfigError("bucket count must be positive");
  if (systems.empty()) throw ConfigError("divergence report needs at least one system");
  const Schema& schema = test.schema();
  if (!(train.schema() == schema)) throw DataError("train and test schemas differ");
  size_t task_stream = schema.stream_index(task);
  if (task_stream == Schema::npos || !schema.is_task(task_stream)) {
    throw DataError("unknown task '" + task + "'");
  }
  size_t t = schema.task_of_stream(task_stream);
  size_t words = surface_stream(schema);
  const std::string& word_stream = schema.stream_name(words);

  for (const auto& [name, sys] : systems) {
    bool aligned = sys != nullptr && sys->schema() == schema &&
                   sys->token_count() == test.token_count() &&
                   sys->sentence_count() == test.sentence_count();
    for (size_t s = 0; aligned && s < test.sentence_count(); ++s) {
      aligned = sys->sentence_begin(s) == test.sentence_begin(s);
    }
    for (size_t pos = 0; aligned && pos < test.token_count(); ++pos) {
      aligned = sys->gold(words, pos) == test.gold(words, pos);
    }
    if (!aligned) {
      throw DataError("system '" + name + "' is not aligned with the test corpus");
    }
    sys->require_initialized();
  }

  // Initial states for both corpora under the training lexicon.
  Lexicon lexicon = build_lexicon(train);
  Corpus train_init = train;
  Corpus test_init = test;
  initialize(train_init, lexicon);
  initialize(test_init, lexicon);

  std::set<std::string> alphabet;
  for (size_t pos = 0; pos < train_init.token_count(); ++pos) {
    alphabet.insert(train_init.current(t, pos));
  }
  for (size_t pos = 0; pos < test_init.token_count(); ++pos) {
    alphabet.insert(test_init.current(t, pos));
  }

  auto train_dists = build_conditionals(train_init, task, word_stream, alphabet);
  auto test_dists = build_conditionals(test_init, task, word_stream, alphabet);

  std::map<std::string, long long> test_freq;
  for (size_t pos = 0; pos < test.token_count(); ++pos) {
    test_freq[test.gold(words, pos)] += 1;
  }

  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [word, freq] : test_freq) {
    auto pt = train_dists.find(word);
    const ConditionalDist p =
        pt != train_dists.end()
            ? pt->second
            : smoothed_conditional(word, {}, alphabet);  // unseen: uniform
    ranked.emplace_back(kl_divergence(p, test_dists.at(word)), word);
  }
  std::sort(ranked.begin(), ranked.end());

  // Equal token mass per bucket, each word kept whole.
  long long total = static_cast<long long>(test.token_count());
  std::map<std::string, size_t> bucket_of;
  DivergenceReport report;
  report.buckets.resize(bucket_count);
  for (size_t b = 0; b < bucket_count; ++b) report.buckets[b].index = b;
  // Words sharing a divergence value always land in one bucket, so identical
  // train/test distributions collapse into a single effective bucket.
  long long cum = 0;
  for (size_t i = 0; i < ranked.size();) {
    size_t run = i;
    while (run < ranked.size() && ranked[run].first == ranked[i].first) ++run;
    size_t b = static_cast<size_t>(cum * static_cast<long long>(bucket_count) / total);
    for (; i < run; ++i) {
      const auto& [div, word] = ranked[i];
      bucket_of[word] = b;
      DivergenceBucket& bucket = report.buckets[b];
      if (bucket.tokens == 0) bucket.min_divergence = div;
      bucket.min_divergence = std::min(bucket.min_divergence, div);
      bucket.max_divergence = std::max(bucket.max_divergence, div);
      bucket.tokens += test_freq.at(word);
      cum += test_freq.at(word);
    }
  }

  for (const auto& [name, sys] : systems) report.systems.push_back(name);

  std::vector<size_t> pos_bucket(test.token_count());
  for (size_t pos = 0; pos < test.token_count(); ++pos) {
    pos_bucket[pos] = bucket_of.at(test.gold(words, pos));
  }

  for (DivergenceBucket& bucket : report.buckets) {
    bucket.accuracy.assign(systems.size(), 1.0);  // vacuous for empty buckets
  }
  for (size_t s = 0; s < systems.size(); ++s) {
    std::vector<long long> right(bucket_count, 0);
    for (size_t pos = 0; pos < test.token_count(); ++pos) {
      right[pos_bucket[pos]] +=
          systems[s].second->current(t, pos) == test.gold(task_stream, pos);
    }
    for (size_t b = 0; b < bucket_count; ++b) {
      if (report.buckets[b].tokens != 0) {
        report.buckets[b].accuracy[s] =
            static_cast<double>(right[b]) /
            static_cast<double>(report.buckets[b].tokens);
      }
    }
  }

  // Chunk F per bucket, over spans lying wholly inside one bucket; skipped
  // when the task's tags don't decode as B/I/O.
  try {
    // found/correct/truth per (system, bucket)
    std::vector<std::vector<long long>> found(systems.size(),
                                              std::vector<long long>(bucket_count, 0));
    auto correct = found;
    std::vector<long long> truth(bucket_count, 0);
    for (size_t sent = 0; sent < test.sentence_count(); ++sent) {
      size_t begin = test.sentence_begin(sent);
      size_t end = test.sentence_end(sent);
      std::vector<std::string> gold_tags;
      for (size_t pos = begin; pos < end; ++pos) {
        gold_tags.push_back(test.gold(task_stream, pos));
      }
      // Bucket of a span, or npos when it straddles buckets.
      auto span_bucket = [&](const Span& span) -> size_t {
        size_t b = pos_bucket[begin + span.start];
        for (size_t i = span.start + 1; i <= span.end; ++i) {
          if (pos_bucket[begin + i] != b) return Schema::npos;
        }
        return b;
      };
      std::vector<Span> gold_spans = decode_bio(gold_tags);
      for (const Span& span : gold_spans) {
        size_t b = span_bucket(span);
        if (b != Schema::npos) truth[b] += 1;
      }
      for (size_t s = 0; s < systems.size(); ++s) {
        std::vector<std::string> tags;
        for (size_t pos = begin; pos < end; ++pos) {
          tags.push_back(systems[s].second->current(t, pos));
        }
        std::vector<Span> spans = decode_bio(tags);
        for (const Span& span : spans) {
          size_t b = span_bucket(span);
          if (b == Schema::npos) continue;
          found[s][b] += 1;
          correct[s][b] += std::find(gold_spans.begin(), gold_spans.end(),
                                     span) != gold_spans.end();
        }
      }
    }
    for (size_t b = 0; b < bucket_count; ++b) {
      for (size_t s = 0; s < systems.size(); ++s) {
        PRF prf = prf_from_counts(found[s][b], correct[s][b], truth[b]);
        report.buckets[b].chunk_f.push_back(
            boost::rational_cast<double>(prf.f));
      }
    }
    report.has_chunk_f = true;
  } catch (const DataError&) {
    for (DivergenceBucket& bucket : report.buckets) bucket.chunk_f.clear();
    report.has_chunk_f = false;
  }
  return report;
}

void write_divergence_report(const DivergenceReport& report, std::ostream& out) {
  out << "# train/test initial-state divergence (nats); equal token mass per bucket\n";
  out << std::left << std::setw(8) << "bucket" << std::setw(20) << "divergence"
      << std::setw(9) << "tokens";
  for (const std::string& s : report.systems) out << std::setw(16) << ("acc:" + s);
  if (report.has_chunk_f) {
    for (const std::string& s : report.systems) out << std::setw(16) << ("f:" + s);
  }
  out << '\n';
  for (const DivergenceBucket& b : report.buckets) {
    std::string range = "[" + format_4dp(b.min_divergence) + ", " +
                        format_4dp(b.max_divergence) + "]";
    out << std::left << std::setw(8) << (b.index + 1) << std::setw(20) << range
        << std::setw(9) << b.tokens;
    for (double a : b.accuracy) {
      out << std::setw(16) << (b.tokens == 0 ? std::string("-") : format_4dp(a));
    }
    if (report.has_chunk_f) {
      for (double f : b.chunk_f) {
        out << std::setw(16) << (b.tokens == 0 ? std::string("-") : format_4dp(f));
      }
    }
    out << '\n';
  }
}

}  // namespace mtbl
