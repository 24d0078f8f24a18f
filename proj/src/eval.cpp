#include "mtbl/eval.h"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "mtbl/errors.h"

namespace mtbl {

namespace {

long long count_exact_matches(std::vector<Span> a, std::vector<Span> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  long long matches = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++matches;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return matches;
}

std::string format_4dp(const Rational& value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f",
                boost::rational_cast<double>(value));
  return buf;
}

size_t require_task(const Schema& schema, const std::string& task) {
  size_t stream = schema.stream_index(task);
  if (stream == Schema::npos || !schema.is_task(stream)) {
    throw DataError("unknown task '" + task + "'");
  }
  return stream;
}

std::vector<std::string> sentence_tags(const Corpus& corpus, size_t task,
                                       size_t begin, size_t end, bool gold,
                                       size_t stream) {
  std::vector<std::string> tags;
  tags.reserve(end - begin);
  for (size_t pos = begin; pos < end; ++pos) {
    tags.push_back(gold ? corpus.gold(stream, pos) : corpus.current(task, pos));
  }
  return tags;
}

}  // namespace

PRF prf_from_counts(long long found, long long correct, long long truth,
                    const Rational& beta) {
  if (beta <= Rational(0)) throw ConfigError("beta must be positive");
  if (found < 0 || truth < 0 || correct < 0 || correct > found ||
      correct > truth) {
    throw DataError("inconsistent span counts");
  }
  PRF prf;
  prf.beta = beta;
  prf.found = found;
  prf.correct = correct;
  prf.truth = truth;
  if (found == 0 && truth == 0) {
    prf.precision = prf.recall = prf.f = Rational(1);
    return prf;
  }
  prf.precision = found == 0 ? Rational(0) : Rational(correct, found);
  prf.recall = truth == 0 ? Rational(0) : Rational(correct, truth);
  Rational b2 = beta * beta;
  Rational denom = b2 * prf.precision + prf.recall;
  prf.f = denom == Rational(0)
              ? Rational(0)
              : Rational(2) * b2 * prf.precision * prf.recall / denom;
  return prf;
}

PRF chunk_prf(const std::vector<Span>& predicted, const std::vector<Span>& gold,
              const Rational& beta) {
  return prf_from_counts(static_cast<long long>(predicted.size()),
                         count_exact_matches(predicted, gold),
                         static_cast<long long>(gold.size()), beta);
}

PRF segmentation_prf(const std::vector<std::string>& predicted,
                     const std::vector<std::string>& gold) {
  if (predicted.size() != gold.size()) {
    throw DataError("segmentation sequences differ in length");
  }
  return chunk_prf(decode_segmentation(predicted), decode_segmentation(gold));
}

Rational accuracy(const Corpus& corpus, const std::string& task) {
  size_t stream = require_task(corpus.schema(), task);
  size_t t = corpus.schema().task_of_stream(stream);
  if (corpus.token_count() == 0) throw DataError("cannot evaluate an empty corpus");
  long long right = 0;
  for (size_t pos = 0; pos < corpus.token_count(); ++pos) {
    right += corpus.current_id(t, pos) == corpus.gold_id(stream, pos);
  }
  return Rational(right, static_cast<long long>(corpus.token_count()));
}

std::string word_pos_majority(const std::vector<std::string>& char_pos_tags,
                              const Span& word) {
  if (word.start > word.end || word.end >= char_pos_tags.size()) {
    throw DataError("word span outside the tag sequence");
  }
  std::map<std::string, size_t> counts;
  for (size_t i = word.start; i <= word.end; ++i) ++counts[char_pos_tags[i]];
  size_t best = 0;
  for (const auto& [tag, count] : counts) best = std::max(best, count);
  for (size_t i = word.start; i <= word.end; ++i) {
    if (counts[char_pos_tags[i]] == best) return char_pos_tags[i];
  }
  throw DataError("empty word span");
}

EvalReport evaluate(const Corpus& corpus, const EvalSpec& spec) {
  const Schema& schema = corpus.schema();
  corpus.require_initialized();
  if (corpus.token_count() == 0) throw DataError("cannot evaluate an empty corpus");

  EvalReport report;
  for (const TaskEval& te : spec.tasks) {
    size_t stream = require_task(schema, te.task);
    size_t task = schema.task_of_stream(stream);
    TaskReport tr;
    tr.task = te.task;
    tr.style = te.style;
    tr.accuracy = accuracy(corpus, te.task);
    if (te.style != TaskEval::Style::kToken) {
      bool seg = te.style == TaskEval::Style::kSegmentation;
      long long found = 0, correct = 0, truth = 0;
      for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
        size_t begin = corpus.sentence_begin(sent);
        size_t end = corpus.sentence_end(sent);
        auto cur = sentence_tags(corpus, task, begin, end, false, stream);
        auto gold = sentence_tags(corpus, task, begin, end, true, stream);
        auto pred_spans = seg ? decode_segmentation(cur) : decode_bio(cur);
        auto gold_spans = seg ? decode_segmentation(gold) : decode_bio(gold);
        found += static_cast<long long>(pred_spans.size());
        truth += static_cast<long long>(gold_spans.size());
        correct += count_exact_matches(pred_spans, gold_spans);
      }
      tr.has_prf = true;
      tr.prf = prf_from_counts(found, correct, truth,
                               seg ? Rational(1) : spec.beta);
    }
    report.tasks.push_back(std::move(tr));
  }

  if (!spec.word_pos_seg.empty()) {
    size_t seg_stream = require_task(schema, spec.word_pos_seg);
    size_t seg_task = schema.task_of_stream(seg_stream);
    size_t pos_stream = require_task(schema, spec.word_pos_task);
    size_t pos_task = schema.task_of_stream(pos_stream);
    long long right = 0, words = 0;
    for (size_t sent = 0; sent < corpus.sentence_count(); ++sent) {
      size_t begin = corpus.sentence_begin(sent);
      size_t end = corpus.sentence_end(sent);
      auto gold_seg = sentence_tags(corpus, seg_task, begin, end, true, seg_stream);
      auto cur_pos = sentence_tags(corpus, pos_task, begin, end, false, pos_stream);
      auto gold_pos = sentence_tags(corpus, pos_task, begin, end, true, pos_stream);
      for (const Span& word : decode_segmentation(gold_seg)) {
        right += word_pos_majority(cur_pos, word) ==
                 word_pos_majority(gold_pos, word);
        ++words;
      }
    }
    report.has_word_pos = true;
    report.word_count = words;
    report.word_pos_accuracy =
        words == 0 ? Rational(1) : Rational(right, words);
  }
  return report;
}

void write_eval_table(const EvalReport& report, std::ostream& out) {
  out << std::left << std::setw(16) << "task" << std::setw(14) << "style"
      << std::setw(10) << "accuracy" << std::setw(11) << "precision"
      << std::setw(9) << "recall" << "f\n";
  for (const TaskReport& tr : report.tasks) {
    const char* style = tr.style == TaskEval::Style::kToken          ? "token"
                        : tr.style == TaskEval::Style::kChunk        ? "chunk"
                                                                     : "segmentation";
    out << std::left << std::setw(16) << tr.task << std::setw(14) << style
        << std::setw(10) << format_4dp(tr.accuracy);
    if (tr.has_prf) {
      out << std::setw(11) << format_4dp(tr.prf.precision) << std::setw(9)
          << format_4dp(tr.prf.recall) << format_4dp(tr.prf.f);
    } else {
      out << std::setw(11) << "-" << std::setw(9) << "-" << "-";
    }
    out << '\n';
  }
  if (report.has_word_pos) {
    out << "word-level tag accuracy (majority vote): "
        << format_4dp(report.word_pos_accuracy) << " over "
        << report.word_count << " words\n";
  }
}

void write_eval_machine(const EvalReport& report, std::ostream& out) {
  for (const TaskReport& tr : report.tasks) {
    out << tr.task << "\taccuracy\t" << format_4dp(tr.accuracy) << '\n';
    if (tr.has_prf) {
      out << tr.task << "\tprecision\t" << format_4dp(tr.prf.precision) << '\n';
      out << tr.task << "\trecall\t" << format_4dp(tr.prf.recall) << '\n';
      out << tr.task << "\tf\t" << format_4dp(tr.prf.f) << '\n';
    }
  }
  if (report.has_word_pos) {
    out << "word_pos\taccuracy\t" << format_4dp(report.word_pos_accuracy)
        << '\n';
  }
}

}  // namespace mtbl
