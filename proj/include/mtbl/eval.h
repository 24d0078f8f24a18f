#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtbl/corpus.h"
#include "mtbl/rational.h"
#include "mtbl/spans.h"

namespace mtbl {

// Exact precision/recall/F over span counts. At beta=1 f is the harmonic
// mean of precision and recall.
struct PRF {
  Rational precision{0};
  Rational recall{0};
  Rational f{0};
  Rational beta{1};
  long long found = 0;
  long long correct = 0;
  long long truth = 0;
};

// found=0 gives P=0, truth=0 gives R=0, both empty count as perfect, and a
// zero F denominator gives F=0. Throws on beta <= 0.
PRF prf_from_counts(long long found, long long correct, long long truth,
                    const Rational& beta = Rational(1));

// Exact (start, end, label) span matching.
PRF chunk_prf(const std::vector<Span>& predicted, const std::vector<Span>& gold,
              const Rational& beta = Rational(1));

// Decodes both B/I tag sequences into word spans and scores them at beta=1.
PRF segmentation_prf(const std::vector<std::string>& predicted,
                     const std::vector<std::string>& gold);

// Fraction of tokens whose current tag equals gold on the named task.
Rational accuracy(const Corpus& corpus, const std::string& task);

// Modal tag over the span's characters; ties go to the earliest position
// holding a tied tag.
std::string word_pos_majority(const std::vector<std::string>& char_pos_tags,
                              const Span& word);

struct TaskEval {
  std::string task;
  enum class Style { kToken, kChunk, kSegmentation };
  Style style = Style::kToken;
};

struct EvalSpec {
  std::vector<TaskEval> tasks;
  Rational beta{1};  // chunk-style F only; segmentation is scored at beta=1
  // When set, also scores word-level tags for exploded character corpora:
  // per gold word span of seg_task, the majority vote of pos_task's current
  // tags must match the vote over its gold tags.
  std::string word_pos_seg;
  std::string word_pos_task;
};

struct TaskReport {
  std::string task;
  TaskEval::Style style = TaskEval::Style::kToken;
  Rational accuracy{0};
  bool has_prf = false;
  PRF prf;
};

struct EvalReport {
  std::vector<TaskReport> tasks;
  bool has_word_pos = false;
  Rational word_pos_accuracy{0};
  long long word_count = 0;
};

// Span metrics are micro-averaged: counts pool over all sentences first.
EvalReport evaluate(const Corpus& corpus, const EvalSpec& spec);

void write_eval_table(const EvalReport& report, std::ostream& out);
// One "task<TAB>metric<TAB>value" line per metric, four decimal places.
void write_eval_machine(const EvalReport& report, std::ostream& out);

}  // namespace mtbl
